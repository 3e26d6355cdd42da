//! Rumour veracity classification from stance-annotated social media
//! cascades.
//!
//! The pipeline runs corpus ingestion ([`corpus`]), linguistic scoring
//! ([`lingua`]), propagation forests ([`graph`]), stance-weighted feature
//! aggregation ([`features`]), classifiers ([`learn`]), cross-validated
//! feature and model selection ([`select`]) and hold-out / time-curve
//! evaluation against simple baselines ([`bench`]).
//!
//! Numeric learning code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the pipeline uses.

pub mod corpus;
pub mod graph;
pub mod lingua;
pub mod scalar;

pub use scalar::Scalar;
pub mod bench;
pub mod features;
pub mod learn;
pub mod linalg;
pub mod select;

pub type Design = learn::Design<f64>;
pub type Hyperparams = learn::Hyperparams<f64>;
pub type Model = learn::TrainedModel<f64>;
pub type Pca = select::Pca<f64>;
