//! Experiment runner behind the `landau-lab` binary.
//!
//! A run is described by an [`ExperimentConfig`], executed by
//! [`run_experiment`] and written out by [`emit_report`].

pub mod args;
pub mod config;
pub mod report;
pub mod run;

pub use config::{ConfigError, ExperimentConfig};
pub use report::{emit_report, Format, Guard, Report, Table};
pub use run::{run_experiment, RunError};
