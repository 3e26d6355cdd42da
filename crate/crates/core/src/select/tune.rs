use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{kfold_cv, SelectError};
use crate::learn::{Criterion, Design, Family, Hyperparams};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TuneResult<T> {
    pub family: Family,
    pub best: Hyperparams<T>,
    pub best_f1: f64,
    /// Every grid point with its mean CV F1, in grid order.
    pub scores: Vec<(Hyperparams<T>, f64)>,
}

/// The hyperparameter searched for each family.
pub fn default_grid<T: Scalar>(family: Family) -> Vec<Hyperparams<T>> {
    let base = Hyperparams::<T>::default();
    match family {
        Family::LogReg => [0.01, 0.1, 1.0, 10.0, 100.0]
            .into_iter()
            .map(|l| Hyperparams { logreg_penalty: T::of(l), ..base.clone() })
            .collect(),
        Family::RandomForest => [10, 50, 100, 200]
            .into_iter()
            .map(|n| Hyperparams { rf_trees: n, ..base.clone() })
            .collect(),
        Family::Cart => [Criterion::Gini, Criterion::Entropy]
            .into_iter()
            .map(|c| Hyperparams { cart_criterion: c, ..base.clone() })
            .collect(),
        Family::NaiveBayes => [1e-9, 1e-6, 1e-3, 1e-1]
            .into_iter()
            .map(|s| Hyperparams { nb_var_smoothing: T::of(s), ..base.clone() })
            .collect(),
        Family::LinearSvm => [0.001, 0.01, 0.1, 1.0]
            .into_iter()
            .map(|l| Hyperparams { svm_penalty: T::of(l), ..base.clone() })
            .collect(),
    }
}

/// Lower is simpler: stronger regularisation, fewer trees, gini, shallower.
fn complexity<T: Scalar>(family: Family, hp: &Hyperparams<T>) -> (f64, f64) {
    let depth = hp.max_depth.map_or(f64::INFINITY, |d| d as f64);
    match family {
        Family::LogReg => (-hp.logreg_penalty.as_f64(), 0.0),
        Family::RandomForest => (hp.rf_trees as f64, depth),
        Family::Cart => ((hp.cart_criterion == Criterion::Entropy) as u8 as f64, depth),
        Family::NaiveBayes => (-hp.nb_var_smoothing.as_f64(), 0.0),
        Family::LinearSvm => (-hp.svm_penalty.as_f64(), 0.0),
    }
}

/// Exhaustive grid search on mean CV F1; equal scores go to the simpler setting.
pub fn tune<T: Scalar>(
    family: Family,
    grid: &[Hyperparams<T>],
    data: &Design<T>,
    k: usize,
    seed: u64,
) -> Result<TuneResult<T>, SelectError> {
    if grid.is_empty() {
        return Err(SelectError::EmptyGrid);
    }
    let f1s = grid
        .par_iter()
        .map(|hp| kfold_cv(family, hp, data, k, seed).map(|r| r.f1.mean))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best = 0;
    for i in 1..grid.len() {
        let better = f1s[i] > f1s[best]
            || (f1s[i] == f1s[best] && complexity(family, &grid[i]) < complexity(family, &grid[best]));
        if better {
            best = i;
        }
    }
    Ok(TuneResult {
        family,
        best: grid[best].clone(),
        best_f1: f1s[best],
        scores: grid.iter().cloned().zip(f1s).collect(),
    })
}
