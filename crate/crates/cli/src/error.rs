use std::path::PathBuf;

use qmeasure_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const STATISTICAL_FAILURE: u8 = 3;
    pub const IO: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } | CliError::ConfigRead { .. } => exit::IO,
            CliError::Core(e) => match e {
                CoreError::Shape(_) | CoreError::Domain(_) | CoreError::Configuration(_) | CoreError::Efficiency { .. } => {
                    exit::USAGE
                }
                CoreError::Validation(_) | CoreError::NoConvergence { .. } => exit::INTERNAL,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
