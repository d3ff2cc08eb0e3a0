use std::path::PathBuf;

use gna_core::classify::AsymptoticReport;
use gna_core::error::{ErrorCategory, GnaError};
use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("malformed {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("{0}")]
    Input(String),

    #[error("{context}: {source}")]
    Core { context: String, source: GnaError },
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(GnaError) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self.category() {
            ErrorCategory::Input => 2,
            ErrorCategory::Precondition => 3,
            ErrorCategory::Postcondition => 4,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            CliError::Core { source, .. } => source.category(),
            _ => ErrorCategory::Input,
        }
    }

    pub fn report(&self) -> Option<&AsymptoticReport> {
        match self {
            CliError::Core { source, .. } => source.report(),
            _ => None,
        }
    }
}

impl From<GnaError> for CliError {
    fn from(source: GnaError) -> Self {
        CliError::Core { context: "operation failed".into(), source }
    }
}
