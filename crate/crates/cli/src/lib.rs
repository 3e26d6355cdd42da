//! Pipeline commands, on-disk artifacts and the HTTP service that serves them.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod service;

pub use artifacts::{Artifacts, SCHEMA_VERSION};
pub use config::RunConfig;
