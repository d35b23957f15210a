use std::path::PathBuf;

use hyperlab_core::error::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hyperlab_core::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Box<CliError> },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 0 success, 2 precondition, 3 budget exhausted, 4 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Precondition => 2,
                ErrorKind::Budget => 3,
                ErrorKind::Internal => 4,
            },
            CliError::File { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        CliError::File { path: path.into(), source: Box::new(self) }
    }
}
