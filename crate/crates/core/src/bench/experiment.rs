use serde::{Deserialize, Serialize};

use super::{
    benchmark_curves, benchmark_metrics, evaluate_holdout, time_curves, train_test_split, BenchError, Benchmark,
    CurveProtocol, MetricsRow, MetricsTable, ModelSpec, Split, SplitSpec, TimeCurveSet, WindowStats,
};
use crate::corpus::{close_annotations, Dataset};
use crate::features::{FeatureCatalog, FeatureExtractor, FeatureTable, RumourTimeSeries};
use crate::learn::{Family, Hyperparams, TrainedModel};
use crate::lingua::Lexicon;
use crate::select::{default_grid, reduce_features, tune, Method, ReduceOptions, SelectionTrace, TuneResult};

/// Closes annotations and extracts the 20-window series of every rumour.
pub fn prepare_series(
    dataset: Dataset,
    lexicon: &Lexicon,
    catalog: &FeatureCatalog,
) -> Result<Vec<RumourTimeSeries>, BenchError> {
    let ds = close_annotations(dataset)?;
    let ex = FeatureExtractor::new(&ds.users, &ds.followees, lexicon, catalog);
    Ok(ex.extract_all(&ds.rumours)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub method: Method,
    pub budget: usize,
    pub k_folds: usize,
    pub split: SplitSpec,
    pub protocol: CurveProtocol,
    /// Grid-search each family on its selected features.
    pub tune: bool,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: vec![Family::LogReg, Family::Cart, Family::RandomForest],
            method: Method::Forward,
            budget: 30,
            k_folds: 10,
            split: SplitSpec::default(),
            protocol: CurveProtocol::TrainFull,
            tune: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub split: Split,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub traces: Vec<SelectionTrace>,
    pub tuning: Vec<TuneResult<f64>>,
    pub specs: Vec<ModelSpec<f64>>,
    pub models: Vec<(String, TrainedModel<f64>)>,
    /// Models and benchmarks on the test half, full-duration features.
    pub holdout: MetricsTable,
    /// Models and benchmarks on the test half.
    pub curves: TimeCurveSet,
    /// Benchmarks on every rumour.
    pub benchmark_curves_all: TimeCurveSet,
}

/// Selection on the training half (default hyperparameters), tuning on the
/// selected features, then hold-out metrics and time curves on the test half.
pub fn run_experiment(series: &[RumourTimeSeries], config: &ExperimentConfig) -> Result<ExperimentReport, BenchError> {
    let y: Vec<bool> = series.iter().map(|s| s.veracity).collect();
    let split = train_test_split(&y, &config.split)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| series[i].clone()).collect::<Vec<_>>();
    let (train, test) = (pick(&split.train), pick(&split.test));
    let train_design = FeatureTable::full(&train).design::<f64>();
    let test_design = FeatureTable::full(&test).design::<f64>();

    let opts = ReduceOptions {
        budget: config.budget,
        k_folds: config.k_folds,
        seed: config.seed,
    };
    let mut traces = Vec::new();
    let mut tuning = Vec::new();
    let mut specs = Vec::new();
    for &family in &config.families {
        log::info!("selecting features for {family}");
        let trace = reduce_features(config.method, family, &Hyperparams::default(), &train_design, &opts)?;
        let size = trace.best_step().map_or(0, |s| s.size);
        let features = trace.prefix(size);
        let hyperparams = if config.tune {
            log::info!("tuning {family} on {} features", features.len());
            let sub = train_design.columns_by_name(&features)?;
            let t = tune(family, &default_grid(family), &sub, config.k_folds, config.seed)?;
            let best = t.best.clone();
            tuning.push(t);
            best
        } else {
            Hyperparams::default()
        };
        traces.push(trace);
        specs.push(ModelSpec {
            name: family.short_name().to_string(),
            family,
            hyperparams,
            features,
            seed: config.seed,
        });
    }

    let models = specs
        .iter()
        .map(|s| Ok((s.name.clone(), s.fit(&train_design)?)))
        .collect::<Result<Vec<_>, BenchError>>()?;
    let mut holdout = evaluate_holdout(&models, &test_design)?;
    let full_stats: Vec<WindowStats> = test.iter().map(|s| s.stance_counts.last().expect("20 windows").into()).collect();
    for b in Benchmark::ALL {
        holdout.rows.push(MetricsRow {
            model: b.name().to_string(),
            metrics: benchmark_metrics(b, &full_stats, &test_design.y, config.seed),
        });
    }
    let curves = time_curves(&specs, &Benchmark::ALL, &train, &test, config.protocol, config.seed)?;
    let benchmark_curves_all = TimeCurveSet {
        rumours: series.len(),
        curves: benchmark_curves(&Benchmark::ALL, series, config.seed),
    };
    Ok(ExperimentReport {
        train_ids: train.iter().map(|s| s.rumour_id.clone()).collect(),
        test_ids: test.iter().map(|s| s.rumour_id.clone()).collect(),
        split,
        traces,
        tuning,
        specs,
        models,
        holdout,
        curves,
        benchmark_curves_all,
    })
}
