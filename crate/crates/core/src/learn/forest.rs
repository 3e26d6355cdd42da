use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::Grower;
use super::{DecisionTree, Design, Hyperparams, LearnError};
use crate::Scalar;

/// Seed for member `index` of a model seeded with `seed` (splitmix64 mix).
pub fn tree_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RandomForest<T> {
    pub trees: Vec<DecisionTree<T>>,
    pub tree_seeds: Vec<u64>,
}

impl<T: Scalar> RandomForest<T> {
    pub fn fit(x: &Array2<T>, y: &[bool], hp: &Hyperparams<T>, seed: u64) -> Self {
        let n = x.nrows();
        let m = x.ncols();
        let k = hp.rf_max_features.resolve(m);
        let tree_seeds: Vec<u64> = (0..hp.rf_trees as u64).map(|i| tree_seed(seed, i)).collect();
        let trees = tree_seeds
            .par_iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let rows: Vec<usize> = if hp.rf_bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let sampling = (k < m).then_some((k, rng));
                Grower {
                    x,
                    y,
                    criterion: hp.cart_criterion,
                    max_depth: hp.max_depth,
                    sampling,
                }
                .grow(rows)
            })
            .collect();
        Self { trees, tree_seeds }
    }

    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        let sum = self.trees.iter().map(|t| t.predict_proba(row)).sum::<T>();
        sum / T::of_usize(self.trees.len())
    }

    /// Mean of the per-tree normalised importances, renormalised.
    pub fn feature_importances(&self) -> Vec<T> {
        let m = self.trees.first().map_or(0, |t| t.n_features);
        let mut imp = vec![T::zero(); m];
        for t in &self.trees {
            for (a, b) in imp.iter_mut().zip(t.feature_importances()) {
                *a += b;
            }
        }
        let sum = imp.iter().copied().sum::<T>();
        if sum > T::zero() {
            imp.iter_mut().for_each(|v| *v /= sum);
        }
        imp
    }
}

/// Mean random-forest importance per feature over `runs` forests with
/// distinct seeds, in column order.
pub fn rf_importance<T: Scalar>(
    data: &Design<T>,
    hp: &Hyperparams<T>,
    runs: usize,
    seed: u64,
) -> Result<Vec<(String, T)>, LearnError> {
    hp.validate()?;
    data.check_trainable()?;
    let runs = runs.max(1);
    let per_run: Vec<Vec<T>> = (0..runs as u64)
        .into_par_iter()
        .map(|r| RandomForest::fit(&data.x, &data.y, hp, tree_seed(seed ^ 0xA5A5_5A5A, r)).feature_importances())
        .collect();
    let mut mean = vec![T::zero(); data.n_features()];
    for imp in &per_run {
        for (a, &b) in mean.iter_mut().zip(imp) {
            *a += b;
        }
    }
    let r = T::of_usize(runs);
    Ok(data.names.iter().cloned().zip(mean.into_iter().map(|v| v / r)).collect())
}
