use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Binary classification metrics with "true rumour" as the positive class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub accuracy: f64,
    /// Zero when nothing is predicted positive.
    pub precision: f64,
    /// Zero when no positives exist.
    pub recall: f64,
    pub f1: f64,
    /// `None` when one class is absent from `y_true`.
    pub auc: Option<f64>,
    pub kappa: f64,
}

impl Metrics {
    pub fn from_confusion(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let n = (tp + fp + fn_ + tn) as f64;
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let accuracy = ratio(tp + tn, tp + fp + fn_ + tn);
        let kappa = if n == 0.0 {
            0.0
        } else {
            let pe = ((tp + fp) as f64 * (tp + fn_) as f64 + (tn + fn_) as f64 * (tn + fp) as f64) / (n * n);
            if pe >= 1.0 {
                if accuracy >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (accuracy - pe) / (1.0 - pe)
            }
        };
        Self {
            tp,
            fp,
            fn_,
            tn,
            accuracy,
            precision,
            recall,
            f1,
            auc: None,
            kappa,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "accuracy" => Some(self.accuracy),
            "precision" => Some(self.precision),
            "recall" => Some(self.recall),
            "f1" => Some(self.f1),
            "auc" => self.auc,
            "kappa" => Some(self.kappa),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 6] = ["accuracy", "precision", "recall", "f1", "auc", "kappa"];
}

/// Area under the ROC curve as the Mann–Whitney statistic, ties counting one half.
pub fn auc<T: Scalar>(y_true: &[bool], scores: &[T]) -> Option<f64> {
    assert_eq!(y_true.len(), scores.len());
    let pos: Vec<f64> = y_true.iter().zip(scores).filter(|p| *p.0).map(|p| p.1.as_f64()).collect();
    let neg: Vec<f64> = y_true.iter().zip(scores).filter(|p| !*p.0).map(|p| p.1.as_f64()).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &q in &neg {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    Some(wins / (pos.len() * neg.len()) as f64)
}

pub fn compute_metrics<T: Scalar>(y_true: &[bool], y_pred: &[bool], y_proba: &[T]) -> Metrics {
    assert_eq!(y_true.len(), y_pred.len(), "labels and predictions differ in length");
    assert_eq!(y_pred.len(), y_proba.len(), "predictions and probabilities differ in length");
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let mut m = Metrics::from_confusion(tp, fp, fn_, tn);
    m.auc = auc(y_true, y_proba);
    m
}
