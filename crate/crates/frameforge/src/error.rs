use std::path::PathBuf;

use frameforge_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("degenerate computation: {0}")]
    Degenerate(String),
    #[error("residual suite failed: {0}")]
    Suite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Input { .. } | CliError::Io { .. } => 2,
            CliError::Degenerate(_) => 3,
            CliError::Suite(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_degenerate() {
            CliError::Degenerate(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
