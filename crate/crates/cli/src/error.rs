use std::path::{Path, PathBuf};

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] utaylor_core::Error),

    #[error("{0}")]
    Validation(String),

    #[error("cannot {action} {}: {source}", path.display())]
    Io { action: &'static str, path: PathBuf, source: std::io::Error },

    /// Checks ran and some failed; the reports were written.
    #[error("{0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn io(action: &'static str, path: &Path, source: std::io::Error) -> Self {
        CliError::Io { action, path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(utaylor_core::Error::Certificate { .. }) | CliError::ChecksFailed(_) => EXIT_CERTIFICATE,
            CliError::Core(_) | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
