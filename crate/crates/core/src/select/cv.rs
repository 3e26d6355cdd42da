use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_metrics, Metrics, SelectError};
use crate::learn::{train, Design, Family, Hyperparams};
use crate::Scalar;

/// Stratified fold labels: positives and negatives are shuffled separately,
/// concatenated and dealt round-robin, so fold sizes differ by at most one.
pub fn stratified_folds(y: &[bool], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..y.len()).filter(|&i| y[i]).collect();
    let mut neg: Vec<usize> = (0..y.len()).filter(|&i| !y[i]).collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut fold = vec![0; y.len()];
    for (slot, &i) in pos.iter().chain(&neg).enumerate() {
        fold[i] = slot % k;
    }
    fold
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self { mean: f64::NAN, std: f64::NAN };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Self { mean, std: var.sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub family: Family,
    pub k: usize,
    pub seed: u64,
    /// Fold index of every row.
    pub assignment: Vec<usize>,
    pub folds: Vec<Metrics>,
    /// Folds whose training part held one class and got a constant predictor.
    pub degenerate_folds: usize,
    pub accuracy: MeanStd,
    pub precision: MeanStd,
    pub recall: MeanStd,
    pub f1: MeanStd,
    /// Over folds where AUC is defined.
    pub auc: MeanStd,
    pub kappa: MeanStd,
}

impl CvResult {
    fn from_folds(family: Family, k: usize, seed: u64, assignment: Vec<usize>, folds: Vec<Metrics>, degenerate: usize) -> Self {
        let col = |f: fn(&Metrics) -> f64| MeanStd::of(&folds.iter().map(f).collect::<Vec<_>>());
        let aucs: Vec<f64> = folds.iter().filter_map(|m| m.auc).collect();
        Self {
            family,
            k,
            seed,
            accuracy: col(|m| m.accuracy),
            precision: col(|m| m.precision),
            recall: col(|m| m.recall),
            f1: col(|m| m.f1),
            auc: MeanStd::of(&aucs),
            kappa: col(|m| m.kappa),
            assignment,
            folds,
            degenerate_folds: degenerate,
        }
    }

    /// Plain-text report: one line per fold then the mean and std rows.
    pub fn report(&self) -> String {
        let mut out = format!("family={} k={} seed={}\n", self.family, self.k, self.seed);
        out.push_str("fold,accuracy,precision,recall,f1,auc,kappa\n");
        for (i, m) in self.folds.iter().enumerate() {
            let auc = m.auc.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"));
            out.push_str(&format!(
                "{},{:.4},{:.4},{:.4},{:.4},{},{:.4}\n",
                i + 1,
                m.accuracy,
                m.precision,
                m.recall,
                m.f1,
                auc,
                m.kappa
            ));
        }
        let all = [self.accuracy, self.precision, self.recall, self.f1, self.auc, self.kappa];
        for (label, pick) in [("mean", 0), ("std", 1)] {
            let vals: Vec<String> = all
                .iter()
                .map(|s| format!("{:.4}", if pick == 0 { s.mean } else { s.std }))
                .collect();
            out.push_str(&format!("{label},{}\n", vals.join(",")));
        }
        if self.degenerate_folds > 0 {
            out.push_str(&format!("degenerate_folds={}\n", self.degenerate_folds));
        }
        out
    }
}

/// Stratified k-fold cross-validation; the per-fold F1 values are averaged.
pub fn kfold_cv<T: Scalar>(
    family: Family,
    hp: &Hyperparams<T>,
    data: &Design<T>,
    k: usize,
    seed: u64,
) -> Result<CvResult, SelectError> {
    if k < 2 {
        return Err(SelectError::TooFewFolds(k));
    }
    if k > data.n_rows() {
        return Err(SelectError::MoreFoldsThanRows { k, rows: data.n_rows() });
    }
    let assignment = stratified_folds(&data.y, k, seed);
    let results: Vec<Result<(Metrics, bool), SelectError>> = (0..k)
        .into_par_iter()
        .map(|f| {
            let train_idx: Vec<usize> = (0..data.n_rows()).filter(|&i| assignment[i] != f).collect();
            let test_idx: Vec<usize> = (0..data.n_rows()).filter(|&i| assignment[i] == f).collect();
            let tr = data.rows(&train_idx);
            let te = data.rows(&test_idx);
            let pos = tr.positives();
            let (proba, degenerate) = if pos == 0 || pos == tr.n_rows() {
                let p = if pos == 0 { T::zero() } else { T::one() };
                (vec![p; te.n_rows()], true)
            } else {
                let model = train(family, &tr, hp, seed)?;
                (model.predict_design(&te)?, false)
            };
            let pred: Vec<bool> = proba.iter().map(|&p| p >= T::of(0.5)).collect();
            Ok((compute_metrics(&te.y, &pred, &proba), degenerate))
        })
        .collect();
    let mut folds = Vec::with_capacity(k);
    let mut degenerate = 0;
    for r in results {
        let (m, d) = r?;
        folds.push(m);
        degenerate += d as usize;
    }
    Ok(CvResult::from_folds(family, k, seed, assignment, folds, degenerate))
}
