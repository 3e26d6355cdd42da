//! Classification metrics, stratified cross-validation, ANOVA filtering,
//! principal components, the four feature-reduction methods and grid tuning.

mod anova;
mod cv;
mod metrics;
mod pca;
mod reduce;
mod tune;

pub use anova::{anova_f, top_by_anova};
pub use cv::{kfold_cv, stratified_folds, CvResult, MeanStd};
pub use metrics::{auc, compute_metrics, Metrics};
pub use pca::Pca;
pub use reduce::{
    combinations, reduce_features, Method, ReduceOptions, SelectionStep, SelectionTrace, FEATURE_BUDGET,
    METHOD1_SUBSET,
};
pub use tune::{default_grid, tune, TuneResult};

use crate::learn::LearnError;

#[derive(Debug, thiserror::Error)]
pub enum SelectError {
    #[error("cross-validation needs at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("{k} folds requested for {rows} rows")]
    MoreFoldsThanRows { k: usize, rows: usize },
    #[error("hyperparameter grid is empty")]
    EmptyGrid,
    #[error("feature budget is zero")]
    ZeroBudget,
    #[error("unknown reduction method {0:?} (expected 1-4)")]
    UnknownMethod(String),
    #[error(transparent)]
    Learn(#[from] LearnError),
}
