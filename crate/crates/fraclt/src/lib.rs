//! Batch driver for `fraclt-core`: JSON run configurations, per-job reports,
//! run manifests and the `fraclt` command-line tool.

pub mod cli;
pub mod complex;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use error::{CliError, Result};
