//! Hold-out evaluation, benchmark baselines, accuracy-over-time curves and
//! the synthetic corpus generator.

mod baseline;
mod curves;
mod experiment;
mod holdout;
mod split;
pub mod synth;

pub use baseline::{benchmark_predict, ratio_rule, Benchmark, WindowStats, SUPPORT_AGAINST_RATIO};
pub use curves::{benchmark_curves, ml_curves, time_curves, CurveProtocol, TimeCurve, TimeCurveSet};
pub use experiment::{prepare_series, run_experiment, ExperimentConfig, ExperimentReport};
pub use holdout::{benchmark_metrics, benchmark_predictions, evaluate_holdout, MetricsRow, MetricsTable, ModelSpec};
pub use split::{train_test_split, Split, SplitSpec};
pub use synth::{generate_synthetic, write_synthetic, ClassParams, SynthSpec};

use crate::corpus::CorpusError;
use crate::features::FeatureError;
use crate::learn::LearnError;
use crate::select::SelectError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("{0} half of the split holds a single class")]
    DegenerateSplit(&'static str),
    #[error("unknown benchmark {0:?}")]
    UnknownBenchmark(String),
    #[error("infeasible synthetic spec: {0}")]
    InfeasibleSpec(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Select(#[from] SelectError),
}
