//! Error type of the `rebuf` crate.

use std::path::PathBuf;

/// Errors from file handling, configuration and the runner.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Reading or writing a file failed.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
    /// A sequence or config file did not parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        /// File involved.
        path: PathBuf,
        /// 1-based line number.
        line: usize,
        /// What went wrong.
        message: String,
    },
    /// Semantically invalid configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Error from the simulation core.
    #[error(transparent)]
    Core(#[from] rebuf_core::Error),
    /// CSV writer failure.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// JSON writer failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Exit status: 1 for usage and configuration problems, 2 for runtime
    /// failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) => 1,
            CliError::Core(rebuf_core::Error::InvalidSpec(_))
            | CliError::Core(rebuf_core::Error::UnknownStrategy(_))
            | CliError::Core(rebuf_core::Error::InvalidCapacity)
            | CliError::Core(rebuf_core::Error::MissingSeed(_)) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Result alias for this crate.
pub type Result<T, E = CliError> = std::result::Result<T, E>;
