use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] longmem_core::Error),

    #[error("invalid {param}: {reason}")]
    Param { param: String, reason: String },

    #[error("{path}:{line}: {reason}")]
    Parse { path: String, line: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Config(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Param { .. } => "E_VALIDATION",
            CliError::Parse { .. } => "E_PARSE",
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
            CliError::Config(_) => "E_CONFIG",
        }
    }

    pub(crate) fn param(param: &str, reason: impl Into<String>) -> Self {
        CliError::Param {
            param: param.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// The single line printed on failure.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("{}: {}", self.code(), msg)
    }
}

pub type CliResult<T> = Result<T, CliError>;
