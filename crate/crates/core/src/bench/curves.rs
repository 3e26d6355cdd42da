use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{benchmark_predictions, BenchError, Benchmark, ModelSpec, WindowStats};
use crate::features::{FeatureTable, RumourTimeSeries, WINDOWS};
use crate::learn::tree_seed;
use crate::Scalar;

/// How machine-learning models are trained for the time curves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveProtocol {
    /// Train once on full-duration training features.
    #[default]
    TrainFull,
    /// Retrain on training window `k` before scoring window `k`.
    PerWindow,
}

/// Accuracy at each cumulative interval `1..=20`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeCurve {
    pub model: String,
    pub accuracies: Vec<f64>,
}

impl TimeCurve {
    /// Accuracy at interval `k` (1-based).
    pub fn at(&self, k: usize) -> f64 {
        self.accuracies[k - 1]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeCurveSet {
    /// Rumours scored at each interval.
    pub rumours: usize,
    pub curves: Vec<TimeCurve>,
}

impl TimeCurveSet {
    pub fn get(&self, model: &str) -> Option<&TimeCurve> {
        self.curves.iter().find(|c| c.model == model)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("interval,model,accuracy\n");
        for c in &self.curves {
            for (k, a) in c.accuracies.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", k + 1, c.model, a));
            }
        }
        out
    }
}

fn accuracy(pred: &[bool], y: &[bool]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    pred.iter().zip(y).filter(|(p, t)| p == t).count() as f64 / y.len() as f64
}

/// Curves of trained models scored on the test rumours at each interval.
pub fn ml_curves<T: Scalar>(
    specs: &[ModelSpec<T>],
    train: &[RumourTimeSeries],
    test: &[RumourTimeSeries],
    protocol: CurveProtocol,
) -> Result<Vec<TimeCurve>, BenchError> {
    let y: Vec<bool> = test.iter().map(|s| s.veracity).collect();
    let full_train = FeatureTable::full(train).design::<T>();
    specs
        .iter()
        .map(|spec| {
            let fixed = match protocol {
                CurveProtocol::TrainFull => Some(spec.fit(&full_train)?),
                CurveProtocol::PerWindow => None,
            };
            let accuracies = (1..=WINDOWS)
                .into_par_iter()
                .map(|k| {
                    let model = match &fixed {
                        Some(m) => m.clone(),
                        None => spec.fit(&FeatureTable::window(train, k).design::<T>())?,
                    };
                    let window = FeatureTable::window(test, k).design::<T>();
                    let pred: Vec<bool> = model
                        .predict_design(&window)?
                        .into_iter()
                        .map(|p| p >= T::of(0.5))
                        .collect();
                    Ok(accuracy(&pred, &y))
                })
                .collect::<Result<Vec<_>, BenchError>>()?;
            Ok(TimeCurve {
                model: spec.name.clone(),
                accuracies,
            })
        })
        .collect()
}

/// Benchmark curves over `series`; the random benchmark flips a fresh coin
/// for every rumour and interval.
pub fn benchmark_curves(models: &[Benchmark], series: &[RumourTimeSeries], seed: u64) -> Vec<TimeCurve> {
    let y: Vec<bool> = series.iter().map(|s| s.veracity).collect();
    models
        .iter()
        .map(|&b| {
            let accuracies = (1..=WINDOWS)
                .map(|k| {
                    let stats: Vec<WindowStats> = series.iter().map(|s| (&s.stance_counts[k - 1]).into()).collect();
                    let pred = benchmark_predictions(b, &stats, tree_seed(seed, k as u64));
                    accuracy(&pred, &y)
                })
                .collect();
            TimeCurve {
                model: b.name().to_string(),
                accuracies,
            }
        })
        .collect()
}

/// Machine-learning and benchmark curves on the test rumours.
pub fn time_curves<T: Scalar>(
    specs: &[ModelSpec<T>],
    benchmarks: &[Benchmark],
    train: &[RumourTimeSeries],
    test: &[RumourTimeSeries],
    protocol: CurveProtocol,
    seed: u64,
) -> Result<TimeCurveSet, BenchError> {
    let mut curves = ml_curves(specs, train, test, protocol)?;
    curves.extend(benchmark_curves(benchmarks, test, seed));
    Ok(TimeCurveSet {
        rumours: test.len(),
        curves,
    })
}
