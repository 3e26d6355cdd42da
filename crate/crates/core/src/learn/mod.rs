//! Classifier families with probability outputs: L2 logistic regression,
//! CART, random forests, Gaussian naive Bayes and a linear SVM.
//!
//! All learners are generic over [`Scalar`] and deterministic given a seed.

mod bayes;
mod forest;
mod logistic;
mod scaler;
mod significance;
mod svm;
mod tree;

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::features::FeatureVector;
use crate::Scalar;

pub use bayes::GaussianNb;
pub use forest::{rf_importance, tree_seed, RandomForest};
pub use logistic::{logistic_objective, LogisticModel, LogisticObjective};
pub use scaler::Scaler;
pub use significance::{loglik_significance, FeatureSignificance};
pub use svm::LinearSvm;
pub use tree::{Criterion, DecisionTree, Node, Split};

/// A labelled feature matrix; `y[i]` is `true` for a true rumour.
#[derive(Clone, Debug, PartialEq)]
pub struct Design<T> {
    pub names: Vec<String>,
    pub catalog_version: String,
    pub x: Array2<T>,
    pub y: Vec<bool>,
}

impl<T: Scalar> Design<T> {
    pub fn new(names: Vec<String>, x: Array2<T>, y: Vec<bool>) -> Self {
        assert_eq!(names.len(), x.ncols(), "one name per column");
        assert_eq!(y.len(), x.nrows(), "one label per row");
        Self {
            names,
            catalog_version: String::new(),
            x,
            y,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn positives(&self) -> usize {
        self.y.iter().filter(|&&b| b).count()
    }

    pub fn rows(&self, idx: &[usize]) -> Self {
        Self {
            names: self.names.clone(),
            catalog_version: self.catalog_version.clone(),
            x: self.x.select(Axis(0), idx),
            y: idx.iter().map(|&i| self.y[i]).collect(),
        }
    }

    pub fn columns(&self, idx: &[usize]) -> Self {
        Self {
            names: idx.iter().map(|&j| self.names[j].clone()).collect(),
            catalog_version: self.catalog_version.clone(),
            x: self.x.select(Axis(1), idx),
            y: self.y.clone(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Columns picked by name, in the given order.
    pub fn columns_by_name(&self, names: &[String]) -> Result<Self, LearnError> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n).ok_or_else(|| LearnError::MissingFeature(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.columns(&idx))
    }

    fn check_trainable(&self) -> Result<(), LearnError> {
        if self.n_features() == 0 {
            return Err(LearnError::NoFeatures);
        }
        let pos = self.positives();
        if self.n_rows() < 2 || pos == 0 || pos == self.n_rows() {
            return Err(LearnError::SingleClass);
        }
        if self.x.iter().any(|v| !v.is_finite()) {
            return Err(LearnError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[serde(rename = "logreg")]
    LogReg,
    Cart,
    RandomForest,
    NaiveBayes,
    LinearSvm,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::LogReg,
        Family::Cart,
        Family::RandomForest,
        Family::NaiveBayes,
        Family::LinearSvm,
    ];

    /// Short command-line name.
    pub fn short_name(self) -> &'static str {
        match self {
            Family::LogReg => "logreg",
            Family::Cart => "cart",
            Family::RandomForest => "rf",
            Family::NaiveBayes => "nb",
            Family::LinearSvm => "svm",
        }
    }

    /// Name used in persisted models.
    pub fn long_name(self) -> &'static str {
        match self {
            Family::LogReg => "logreg",
            Family::Cart => "cart",
            Family::RandomForest => "random_forest",
            Family::NaiveBayes => "naive_bayes",
            Family::LinearSvm => "linear_svm",
        }
    }

    /// Whether the family standardises its inputs.
    pub fn standardises(self) -> bool {
        matches!(self, Family::LogReg | Family::LinearSvm)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.short_name() == s || f.long_name() == s)
            .ok_or_else(|| LearnError::UnknownFamily(s.to_string()))
    }
}

/// Number of candidate features examined at each random-forest split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `max(1, floor(sqrt(M)))`
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, m: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => ((m as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::All => m,
            MaxFeatures::Count(k) => k.clamp(1, m.max(1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Hyperparams<T> {
    /// L2 penalty `λ` in `Σ loss + λ/2 ‖w‖²` (on standardised features).
    pub logreg_penalty: T,
    pub rf_trees: usize,
    pub rf_bootstrap: bool,
    pub rf_max_features: MaxFeatures,
    pub cart_criterion: Criterion,
    pub max_depth: Option<usize>,
    /// `λ` in `λ/2 ‖w‖² + mean hinge loss`.
    pub svm_penalty: T,
    pub svm_iterations: usize,
    /// Fraction of the largest feature variance added to every variance.
    pub nb_var_smoothing: T,
}

impl<T: Scalar> Default for Hyperparams<T> {
    fn default() -> Self {
        Self {
            logreg_penalty: T::one(),
            rf_trees: 100,
            rf_bootstrap: true,
            rf_max_features: MaxFeatures::Sqrt,
            cart_criterion: Criterion::Gini,
            max_depth: None,
            svm_penalty: T::of(0.01),
            svm_iterations: 500,
            nb_var_smoothing: T::of(1e-9),
        }
    }
}

impl<T: Scalar> Hyperparams<T> {
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |what: &str| Err(LearnError::InvalidHyperparams(what.to_string()));
        if !(self.logreg_penalty > T::zero()) {
            return bad("logreg_penalty must be positive");
        }
        if self.rf_trees == 0 {
            return bad("rf_trees must be at least 1");
        }
        if !(self.svm_penalty > T::zero()) {
            return bad("svm_penalty must be positive");
        }
        if self.svm_iterations == 0 {
            return bad("svm_iterations must be at least 1");
        }
        if !(self.nb_var_smoothing > T::zero()) {
            return bad("nb_var_smoothing must be positive");
        }
        if self.max_depth == Some(0) {
            return bad("max_depth must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error("training data must contain both classes")]
    SingleClass,
    #[error("training data has no features")]
    NoFeatures,
    #[error("training data contains non-finite values")]
    NonFinite,
    #[error("missing feature {0:?}")]
    MissingFeature(String),
    #[error("unknown classifier family {0:?}")]
    UnknownFamily(String),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("logistic regression did not converge (gradient norm {grad_norm:e})")]
    NotConverged { grad_norm: f64 },
    #[error("model was trained with catalog {found:?}, expected {expected:?}")]
    CatalogMismatch { expected: String, found: String },
    #[error("operation needs a {expected} model, got {found}")]
    WrongFamily { expected: Family, found: Family },
    #[error("model file: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", tag = "kind", rename_all = "snake_case")]
pub enum ModelParams<T> {
    LogReg(LogisticModel<T>),
    Cart(DecisionTree<T>),
    RandomForest(RandomForest<T>),
    NaiveBayes(GaussianNb<T>),
    LinearSvm(LinearSvm<T>),
}

/// A fitted classifier together with the feature subset it consumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TrainedModel<T> {
    pub family: Family,
    pub catalog_version: String,
    pub features: Vec<String>,
    pub seed: u64,
    pub hyperparams: Hyperparams<T>,
    pub params: ModelParams<T>,
}

/// Fits a model of `family` on every column of `data`.
pub fn train<T: Scalar>(
    family: Family,
    data: &Design<T>,
    hp: &Hyperparams<T>,
    seed: u64,
) -> Result<TrainedModel<T>, LearnError> {
    hp.validate()?;
    data.check_trainable()?;
    let params = match family {
        Family::LogReg => ModelParams::LogReg(LogisticModel::fit(&data.x, &data.y, hp.logreg_penalty)?),
        Family::Cart => ModelParams::Cart(DecisionTree::fit(&data.x, &data.y, hp.cart_criterion, hp.max_depth)),
        Family::RandomForest => ModelParams::RandomForest(RandomForest::fit(&data.x, &data.y, hp, seed)),
        Family::NaiveBayes => ModelParams::NaiveBayes(GaussianNb::fit(&data.x, &data.y, hp.nb_var_smoothing)),
        Family::LinearSvm => {
            ModelParams::LinearSvm(LinearSvm::fit(&data.x, &data.y, hp.svm_penalty, hp.svm_iterations))
        }
    };
    Ok(TrainedModel {
        family,
        catalog_version: data.catalog_version.clone(),
        features: data.names.clone(),
        seed,
        hyperparams: hp.clone(),
        params,
    })
}

impl<T: Scalar> TrainedModel<T> {
    /// Probability of the true class for a row aligned with `self.features`.
    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        debug_assert_eq!(row.len(), self.features.len());
        let p = match &self.params {
            ModelParams::LogReg(m) => m.predict_proba(row),
            ModelParams::Cart(m) => m.predict_proba(row),
            ModelParams::RandomForest(m) => m.predict_proba(row),
            ModelParams::NaiveBayes(m) => m.predict_proba(row),
            ModelParams::LinearSvm(m) => m.predict_proba(row),
        };
        p.max(T::zero()).min(T::one())
    }

    pub fn predict(&self, row: ArrayView1<'_, T>) -> bool {
        self.predict_proba(row) >= T::of(0.5)
    }

    /// Probabilities for every row of a matrix whose columns are named; the
    /// model's features are looked up by name.
    pub fn predict_design(&self, data: &Design<T>) -> Result<Vec<T>, LearnError> {
        let cols = data.columns_by_name(&self.features)?;
        Ok(cols.x.rows().into_iter().map(|r| self.predict_proba(r)).collect())
    }

    pub fn predict_vector(&self, v: &FeatureVector) -> Result<T, LearnError> {
        let row = self
            .features
            .iter()
            .map(|n| v.get(n).map(T::of).ok_or_else(|| LearnError::MissingFeature(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.predict_proba(ArrayView1::from(&row)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialise")
    }

    /// Parses a saved model, rejecting one built for a different catalog.
    pub fn from_json(text: &str, expected_catalog: &str) -> Result<Self, LearnError> {
        let model: Self = serde_json::from_str(text).map_err(|e| LearnError::Format(e.to_string()))?;
        if model.catalog_version != expected_catalog {
            return Err(LearnError::CatalogMismatch {
                expected: expected_catalog.to_string(),
                found: model.catalog_version,
            });
        }
        Ok(model)
    }
}
