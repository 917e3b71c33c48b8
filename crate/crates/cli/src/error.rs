use std::path::PathBuf;

use ndviz_core::machine::ValidationReport;
use thiserror::Error;

use crate::{EXIT_CANT_CREATE, EXIT_DATA, EXIT_NO_INPUT, EXIT_SOFTWARE, EXIT_USAGE};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: cannot read: {source}", path.display())]
    NoInput { path: PathBuf, source: std::io::Error },
    #[error("{}: malformed machine: {message}", path.display())]
    Malformed { path: PathBuf, message: String },
    #[error("{}: invalid machine:\n{report}", path.display())]
    Invalid { path: PathBuf, report: ValidationReport },
    #[error("{0}")]
    Data(String),
    #[error("{}: cannot write: {source}", path.display())]
    CantCreate { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NoInput { .. } => EXIT_NO_INPUT,
            CliError::Malformed { .. } | CliError::Invalid { .. } | CliError::Data(_) => EXIT_DATA,
            CliError::CantCreate { .. } => EXIT_CANT_CREATE,
            CliError::Runtime(_) | CliError::Io(_) => EXIT_SOFTWARE,
        }
    }
}
