//! Command-line front end and HTTP service for `fixtrace-core`.

pub mod commands;
pub mod config;
pub mod lru;
pub mod overlay;
pub mod report;
pub mod service;

use std::path::Path;

pub use config::{AlgorithmChoice, RunConfig};
pub use report::{SolveReport, SolveStatus};

/// Command failures, each tied to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("no contour found: {0}")]
    NoPath(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error("verification failed: {0}")]
    Rejected(String),
}

impl CliError {
    pub const EXIT_REJECTED: u8 = 1;
    pub const EXIT_NO_PATH: u8 = 2;
    pub const EXIT_INVALID: u8 = 3;
    pub const EXIT_IO: u8 = 4;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected(_) => Self::EXIT_REJECTED,
            CliError::NoPath(_) => Self::EXIT_NO_PATH,
            CliError::Invalid(_) => Self::EXIT_INVALID,
            CliError::Io { .. } => Self::EXIT_IO,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { context: path.display().to_string(), source }
    }

    /// Wraps a core error, naming `path` as the file involved.
    pub fn with_path(path: &Path, err: fixtrace_core::Error) -> Self {
        match err {
            fixtrace_core::Error::Io(e) => Self::io(path, e),
            other => CliError::Invalid(format!("{}: {other}", path.display())),
        }
    }
}

impl From<fixtrace_core::Error> for CliError {
    fn from(err: fixtrace_core::Error) -> Self {
        match err {
            fixtrace_core::Error::Io(source) => CliError::Io { context: "i/o".into(), source },
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
