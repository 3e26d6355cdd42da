//! Stance-weighted aggregation of tweet, user and network attributes into
//! rumour-level feature vectors.
//!
//! For every attribute the support, neutral and against sides are averaged
//! separately into a [`StanceAggregate`] and combined with
//! [`aggregate_ratio`] `(S + N + 1) / (A + N + 1)`, or with
//! [`aggregate_sentiment`] `S - A` for signed sentiment attributes. The
//! support and deny fractions are used as plain fractions.

mod catalog;
mod extract;
mod table;

use serde::Serialize;

use crate::Scalar;

pub use catalog::{Attribute, CatalogError, FeatureCatalog, FeatureDef, Rule, Source, DEFAULT_CATALOG_VERSION};
pub use extract::{
    window_cutoff, FeatureConfig, FeatureError, FeatureExtractor, RumourTimeSeries, WINDOWS,
};
pub use table::{FeatureRow, FeatureTable, TableError};

/// Per-side means of one attribute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StanceAggregate<T> {
    pub support: T,
    pub neutral: T,
    pub against: T,
}

impl<T: Scalar> StanceAggregate<T> {
    pub fn new(support: T, neutral: T, against: T) -> Self {
        Self { support, neutral, against }
    }

    /// Exchanges the support and against sides.
    pub fn swapped(self) -> Self {
        Self {
            support: self.against,
            neutral: self.neutral,
            against: self.support,
        }
    }
}

pub fn aggregate_ratio<T: Scalar>(agg: &StanceAggregate<T>) -> T {
    (agg.support + agg.neutral + T::one()) / (agg.against + agg.neutral + T::one())
}

pub fn aggregate_sentiment<T: Scalar>(agg: &StanceAggregate<T>) -> T {
    agg.support - agg.against
}

/// An aggregated rumour-level feature vector, ordered as its catalog.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureVector {
    pub catalog_version: String,
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.names.iter().map(String::as_str).zip(self.values.iter().copied())
    }
}
