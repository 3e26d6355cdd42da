use std::fmt;

use serde::{Deserialize, Serialize};

use super::{benchmark_predict, Benchmark, BenchError, WindowStats};
use crate::learn::{train, tree_seed, Design, Family, Hyperparams, TrainedModel};
use crate::select::{compute_metrics, Metrics};
use crate::Scalar;

/// What to train: a family, its hyperparameters and its feature subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelSpec<T> {
    pub name: String,
    pub family: Family,
    pub hyperparams: Hyperparams<T>,
    pub features: Vec<String>,
    pub seed: u64,
}

impl<T: Scalar> ModelSpec<T> {
    pub fn fit(&self, train_half: &Design<T>) -> Result<TrainedModel<T>, BenchError> {
        let d = train_half.columns_by_name(&self.features)?;
        Ok(train(self.family, &d, &self.hyperparams, self.seed)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub model: String,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn get(&self, model: &str) -> Option<&Metrics> {
        self.rows.iter().find(|r| r.model == model).map(|r| &r.metrics)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,accuracy,precision,recall,f1,auc,kappa,tp,fp,fn,tn\n");
        for r in &self.rows {
            let m = &r.metrics;
            let auc = m.auc.map_or_else(String::new, |v| v.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.model, m.accuracy, m.precision, m.recall, m.f1, auc, m.kappa, m.tp, m.fp, m.fn_, m.tn
            ));
        }
        out
    }
}

impl fmt::Display for MetricsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<16} {:>8} {:>9} {:>7} {:>7} {:>7} {:>7}", "model", "accuracy", "precision", "recall", "f1", "auc", "kappa")?;
        for r in &self.rows {
            let m = &r.metrics;
            let auc = m.auc.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
            writeln!(
                f,
                "{:<16} {:>8.3} {:>9.3} {:>7.3} {:>7.3} {:>7} {:>7.3}",
                r.model, m.accuracy, m.precision, m.recall, m.f1, auc, m.kappa
            )?;
        }
        Ok(())
    }
}

/// Scores trained models on a held-out design. Predictions are made from a
/// copy with the labels removed; labels are only read to compute metrics.
pub fn evaluate_holdout<T: Scalar>(
    models: &[(String, TrainedModel<T>)],
    test: &Design<T>,
) -> Result<MetricsTable, BenchError> {
    let unlabelled = Design {
        y: Vec::new(),
        ..test.clone()
    };
    let mut table = MetricsTable::default();
    for (name, model) in models {
        let proba = model.predict_design(&unlabelled)?;
        let pred: Vec<bool> = proba.iter().map(|&p| p >= T::of(0.5)).collect();
        table.rows.push(MetricsRow {
            model: name.clone(),
            metrics: compute_metrics(&test.y, &pred, &proba),
        });
    }
    Ok(table)
}

/// Predictions of a benchmark for a list of rumours; rumour `i` gets its own
/// coin for the random benchmark.
pub fn benchmark_predictions(model: Benchmark, stats: &[WindowStats], seed: u64) -> Vec<bool> {
    stats
        .iter()
        .enumerate()
        .map(|(i, &s)| benchmark_predict(model, s, tree_seed(seed, i as u64)))
        .collect()
}

pub fn benchmark_metrics(model: Benchmark, stats: &[WindowStats], y: &[bool], seed: u64) -> Metrics {
    let pred = benchmark_predictions(model, stats, seed);
    let proba: Vec<f64> = pred.iter().map(|&p| if p { 1.0 } else { 0.0 }).collect();
    compute_metrics(y, &pred, &proba)
}
