//! Driver for the `toricqfi` command-line tool.

pub mod config;
pub mod error;
pub mod manifest;
pub mod plot;
pub mod run;
pub mod selftest;
pub mod table;

pub use config::{Experiment, ExperimentConfig};
pub use error::CliError;
