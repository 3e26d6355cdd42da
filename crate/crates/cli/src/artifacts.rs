//! Files written by the pipeline commands and read back by the service.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rumour_core::corpus::{Dataset, Rumour, Stance, StanceCounts, Timestamp};
use rumour_core::features::{FeatureTable, RumourTimeSeries, WINDOWS};
use rumour_core::graph::build_stance_forests;
use rumour_core::learn::TrainedModel;
use rumour_core::lingua::tokenize;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub const FEATURES_FILE: &str = "features.csv";
pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const FORESTS_FILE: &str = "forests.jsonl";
pub const RUMOURS_FILE: &str = "rumours.json";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const CURVES_FILE: &str = "curves.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SELECTION_FILE: &str = "selection.csv";

const WORD_CLOUD_SIZE: usize = 50;

const STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "am", "an", "and", "any", "are", "as", "at", "be", "because", "been", "but", "by",
    "can", "did", "do", "does", "for", "from", "had", "has", "have", "he", "her", "his", "how", "i", "if", "in",
    "into", "is", "it", "its", "just", "me", "my", "of", "on", "or", "our", "out", "over", "rt", "she", "so", "that",
    "the", "their", "them", "then", "there", "they", "this", "to", "too", "up", "us", "was", "we", "were", "what",
    "when", "who", "will", "with", "you", "your",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanceHistogram {
    pub support: usize,
    pub neutral: usize,
    pub against: usize,
}

impl From<&StanceCounts> for StanceHistogram {
    fn from(c: &StanceCounts) -> Self {
        Self {
            support: c.support,
            neutral: c.neutral,
            against: c.against,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalInfo {
    pub interval: usize,
    pub cutoff: Timestamp,
    pub tweets: usize,
    pub stance_histogram: StanceHistogram,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RumourInfo {
    pub rumour_id: String,
    pub topic: String,
    pub claim: String,
    /// Ground-truth label.
    pub veracity: bool,
    pub started_at: Timestamp,
    pub first_tweet_at: Option<Timestamp>,
    pub verified_at: Timestamp,
    pub intervals: Vec<IntervalInfo>,
    /// Most frequent non-stopword tokens with their counts.
    pub word_frequencies: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RumourIndex {
    pub schema_version: u32,
    pub catalog_version: String,
    pub rumours: Vec<RumourInfo>,
}

/// One forest node of one stance at one interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestLine {
    pub rumour_id: String,
    pub interval: usize,
    pub stance: Stance,
    pub parent: Option<String>,
    pub child: String,
    pub ts: Timestamp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub rumour_id: String,
    pub model: String,
    pub interval: usize,
    pub probability: f64,
    pub predicted: bool,
    /// `train` or `test`.
    pub split: String,
}

pub fn word_frequencies(rumour: &Rumour) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in &rumour.tweets {
        for tok in tokenize(&t.text) {
            if tok.len() > 1 && !tok.starts_with('@') && !STOPWORDS.contains(&tok.as_str()) {
                *counts.entry(tok).or_default() += 1;
            }
        }
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out.truncate(WORD_CLOUD_SIZE);
    out
}

pub fn rumour_info(rumour: &Rumour, series: &RumourTimeSeries) -> RumourInfo {
    RumourInfo {
        rumour_id: rumour.rumour_id.clone(),
        topic: rumour.topic.clone(),
        claim: rumour.claim.clone(),
        veracity: rumour.veracity,
        started_at: rumour.started_at,
        first_tweet_at: rumour.first_tweet_at(),
        verified_at: rumour.verified_at,
        intervals: (0..WINDOWS)
            .map(|i| IntervalInfo {
                interval: i + 1,
                cutoff: series.cutoffs[i],
                tweets: series.tweet_counts[i],
                stance_histogram: (&series.stance_counts[i]).into(),
            })
            .collect(),
        word_frequencies: word_frequencies(rumour),
    }
}

/// Forest nodes of every stance at every interval of `rumour`.
pub fn forest_lines(dataset: &Dataset, rumour: &Rumour, series: &RumourTimeSeries) -> Vec<ForestLine> {
    let mut out = Vec::new();
    for (i, &n) in series.tweet_counts.iter().enumerate() {
        for forest in build_stance_forests(&rumour.tweets[..n], &dataset.followees) {
            out.extend(forest.records(&rumour.rumour_id).into_iter().map(|r| ForestLine {
                rumour_id: r.rumour_id,
                interval: i + 1,
                stance: r.stance,
                parent: r.parent,
                child: r.child,
                ts: r.ts,
            }));
        }
    }
    out
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

/// Writes features, time series, forests and the rumour index for an
/// annotation-closed dataset and its series (same rumour order).
pub fn write_feature_artifacts(dataset: &Dataset, series: &[RumourTimeSeries], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write(dir, FEATURES_FILE, &FeatureTable::full(series).to_csv())?;
    write(dir, TIMESERIES_FILE, &FeatureTable::all_windows(series).to_csv())?;
    let mut forests = String::new();
    let mut rumours = Vec::with_capacity(series.len());
    for (r, s) in dataset.rumours.iter().zip(series) {
        for line in forest_lines(dataset, r, s) {
            forests.push_str(&serde_json::to_string(&line)?);
            forests.push('\n');
        }
        rumours.push(rumour_info(r, s));
    }
    write(dir, FORESTS_FILE, &forests)?;
    let index = RumourIndex {
        schema_version: SCHEMA_VERSION,
        catalog_version: series.first().map(|s| s.full().catalog_version.clone()).unwrap_or_default(),
        rumours,
    };
    write(dir, RUMOURS_FILE, &serde_json::to_string_pretty(&index)?)
}

/// Probability of every model for every rumour and interval.
pub fn prediction_rows(
    models: &[(String, TrainedModel<f64>)],
    series: &[RumourTimeSeries],
    test_ids: &[String],
) -> Result<Vec<PredictionRow>> {
    let mut rows = Vec::new();
    for s in series {
        let split = if test_ids.contains(&s.rumour_id) { "test" } else { "train" };
        for (name, model) in models {
            for k in 1..=WINDOWS {
                let p = model.predict_vector(s.window(k))?;
                rows.push(PredictionRow {
                    rumour_id: s.rumour_id.clone(),
                    model: name.clone(),
                    interval: k,
                    probability: p,
                    predicted: p >= 0.5,
                    split: split.to_string(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_predictions(rows: &[PredictionRow], dir: &Path) -> Result<()> {
    let path = dir.join(PREDICTIONS_FILE);
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<PredictionRow>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}

/// Everything the service serves, loaded once.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub index: RumourIndex,
    pub feature_names: Vec<String>,
    /// `(rumour, interval)` → feature values.
    pub features: HashMap<(String, usize), Vec<f64>>,
    pub forests: HashMap<(String, usize), Vec<ForestLine>>,
    /// `(rumour, interval)` → probability of the served model.
    pub predictions: HashMap<(String, usize), f64>,
    /// Model whose predictions are served, if any were found.
    pub model: Option<String>,
}

impl Artifacts {
    /// Loads an artifact directory. `prefer_model` picks among the models in
    /// the predictions file; without it (or if absent) the first one is used.
    pub fn load(dir: &Path, prefer_model: Option<&str>) -> Result<Self> {
        let read = |name: &str| {
            let p = dir.join(name);
            fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))
        };
        let index: RumourIndex = serde_json::from_str(&read(RUMOURS_FILE)?).context("parsing rumours.json")?;
        if index.schema_version != SCHEMA_VERSION {
            bail!("rumours.json has schema version {}, expected {SCHEMA_VERSION}", index.schema_version);
        }
        let table = FeatureTable::from_csv(&read(TIMESERIES_FILE)?).context("parsing timeseries.csv")?;
        let features = table
            .rows
            .iter()
            .map(|r| ((r.rumour_id.clone(), r.window.unwrap_or(WINDOWS)), r.values.clone()))
            .collect();
        let mut forests: HashMap<(String, usize), Vec<ForestLine>> = HashMap::new();
        for (i, line) in read(FORESTS_FILE)?.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let f: ForestLine = serde_json::from_str(line).with_context(|| format!("forests.jsonl line {}", i + 1))?;
            forests.entry((f.rumour_id.clone(), f.interval)).or_default().push(f);
        }
        let pred_path = dir.join(PREDICTIONS_FILE);
        let rows = if pred_path.exists() { read_predictions(&pred_path)? } else { Vec::new() };
        let model = prefer_model
            .filter(|m| rows.iter().any(|r| r.model == *m))
            .map(str::to_string)
            .or_else(|| rows.first().map(|r| r.model.clone()));
        let predictions = rows
            .into_iter()
            .filter(|r| Some(&r.model) == model.as_ref())
            .map(|r| ((r.rumour_id, r.interval), r.probability))
            .collect();
        Ok(Self {
            index,
            feature_names: table.names,
            features,
            forests,
            predictions,
            model,
        })
    }

    pub fn rumour(&self, id: &str) -> Option<&RumourInfo> {
        self.index.rumours.iter().find(|r| r.rumour_id == id)
    }

    /// Topics with their rumour counts, in first-appearance order.
    pub fn topics(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for r in &self.index.rumours {
            match out.iter_mut().find(|(t, _)| *t == r.topic) {
                Some((_, n)) => *n += 1,
                None => out.push((r.topic.clone(), 1)),
            }
        }
        out
    }
}
