//! The pipeline subcommands as library functions; `main` only parses flags.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rumour_core::bench::{run_experiment, write_synthetic, ExperimentConfig, ExperimentReport, SplitSpec, SynthSpec};
use rumour_core::corpus::{close_annotations, load_corpus, Dataset, SummaryTable};
use rumour_core::features::{FeatureExtractor, FeatureTable, RumourTimeSeries};
use rumour_core::select::{reduce_features, ReduceOptions, SelectionTrace};

use crate::artifacts::{self, prediction_rows, write_feature_artifacts, write_predictions};
use crate::RunConfig;

pub struct Ingested {
    pub dataset: Dataset,
    pub summary: SummaryTable,
    pub warnings: usize,
    /// Tweets that inherited their stance from a retweet source.
    pub closed: usize,
}

/// Loads and validates the corpus, then closes retweet annotations.
pub fn ingest(cfg: &RunConfig) -> Result<Ingested> {
    cfg.validate()?;
    let loaded = load_corpus(&cfg.corpus_paths()?)?;
    let before = loaded.dataset.unannotated_count();
    let dataset = close_annotations(loaded.dataset)?;
    Ok(Ingested {
        summary: dataset.summary(),
        closed: before - dataset.unannotated_count(),
        warnings: loaded.warnings.len(),
        dataset,
    })
}

/// The closed dataset and the time series of each of its rumours, in order.
pub fn load_series(cfg: &RunConfig) -> Result<(Dataset, Vec<RumourTimeSeries>)> {
    let ds = ingest(cfg)?.dataset;
    let lexicon = cfg.load_lexicon()?;
    let catalog = cfg.load_catalog()?;
    let series = FeatureExtractor::new(&ds.users, &ds.followees, &lexicon, &catalog).extract_all(&ds.rumours)?;
    Ok((ds, series))
}

pub fn features(cfg: &RunConfig) -> Result<Vec<RumourTimeSeries>> {
    let (ds, series) = load_series(cfg)?;
    write_feature_artifacts(&ds, &series, &cfg.out)?;
    Ok(series)
}

fn experiment_config(cfg: &RunConfig) -> ExperimentConfig {
    ExperimentConfig {
        families: cfg.families.clone(),
        method: cfg.method,
        k_folds: cfg.k_folds,
        split: SplitSpec {
            seed: cfg.seed,
            ..SplitSpec::default()
        },
        seed: cfg.seed,
        ..ExperimentConfig::default()
    }
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn traces_csv(traces: &[SelectionTrace]) -> String {
    let mut out = String::new();
    for (i, t) in traces.iter().enumerate() {
        let csv = t.to_csv();
        let body = if i == 0 { csv.as_str() } else { csv.split_once('\n').map_or("", |x| x.1) };
        out.push_str(body);
    }
    out
}

/// Runs the reduction method for each family on the training half.
pub fn select(cfg: &RunConfig) -> Result<Vec<SelectionTrace>> {
    let (_, series) = load_series(cfg)?;
    let y: Vec<bool> = series.iter().map(|s| s.veracity).collect();
    let split = rumour_core::bench::train_test_split(&y, &experiment_config(cfg).split)?;
    let train: Vec<RumourTimeSeries> = split.train.iter().map(|&i| series[i].clone()).collect();
    let design = FeatureTable::full(&train).design::<f64>();
    let opts = ReduceOptions {
        k_folds: cfg.k_folds,
        seed: cfg.seed,
        ..ReduceOptions::default()
    };
    let traces = cfg
        .families
        .iter()
        .map(|&f| reduce_features(cfg.method, f, &Default::default(), &design, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    write(&cfg.out, artifacts::SELECTION_FILE, &traces_csv(&traces))?;
    Ok(traces)
}

pub fn experiment(cfg: &RunConfig) -> Result<(Vec<RumourTimeSeries>, ExperimentReport)> {
    let (_, series) = load_series(cfg)?;
    let report = run_experiment(&series, &experiment_config(cfg))?;
    Ok((series, report))
}

fn write_models(report: &ExperimentReport, dir: &Path) -> Result<()> {
    for (name, model) in &report.models {
        write(dir, &format!("model-{name}.json"), &model.to_json())?;
    }
    write(dir, artifacts::SELECTION_FILE, &traces_csv(&report.traces))?;
    write(dir, "specs.json", &serde_json::to_string_pretty(&report.specs)?)
}

/// Selection, tuning and fitting on the training half; writes one model file per family.
pub fn train(cfg: &RunConfig) -> Result<ExperimentReport> {
    let (_, report) = experiment(cfg)?;
    write_models(&report, &cfg.out)?;
    Ok(report)
}

/// Full experiment; writes models, hold-out metrics and per-interval predictions.
pub fn evaluate(cfg: &RunConfig) -> Result<ExperimentReport> {
    let (series, report) = experiment(cfg)?;
    write_models(&report, &cfg.out)?;
    write(&cfg.out, artifacts::METRICS_FILE, &report.holdout.to_csv())?;
    write_predictions(&prediction_rows(&report.models, &series, &report.test_ids)?, &cfg.out)?;
    write(&cfg.out, artifacts::CURVES_FILE, &report.curves.to_csv())?;
    Ok(report)
}

/// Accuracy per interval on the test half for models and benchmarks.
pub fn curves(cfg: &RunConfig) -> Result<ExperimentReport> {
    let (_, report) = experiment(cfg)?;
    write(&cfg.out, artifacts::CURVES_FILE, &report.curves.to_csv())?;
    Ok(report)
}

pub fn synth(spec: &SynthSpec, out: &Path) -> Result<()> {
    write_synthetic(spec, out)?;
    Ok(())
}
