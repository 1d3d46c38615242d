//! File formats, experiment runner and report writers on top of
//! `rebuf-core`.

#![warn(missing_docs)]

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod seqfile;
pub mod trace;

pub use config::{OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use runner::{run_experiment, summarize, ResultRow, SummaryRow};
