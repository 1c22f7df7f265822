use thiserror::Error;

/// Errors produced by the simulation and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {param}: {reason}")]
    Validation { param: &'static str, reason: String },

    #[error("oracle size exceeded: requested {requested}, cap is {cap}")]
    OracleSizeExceeded { requested: usize, cap: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("embedding not nonnegative: eigenvalue {value:e} at index {index} (max {max:e})")]
    EmbeddingNotNonnegative { index: usize, value: f64, max: f64 },

    #[error("zero variance in window")]
    ZeroVariance,

    #[error("degenerate increment for negative moment (q = {q}, depth {depth}, cell {cell})")]
    DegenerateIncrement { q: f64, depth: u32, cell: usize },

    #[error("insufficient scales: {usable} usable, at least {required} required")]
    InsufficientScales { usable: usize, required: usize },
}

impl Error {
    pub(crate) fn invalid(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            param,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable code, used as the prefix of CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "E_VALIDATION",
            Error::OracleSizeExceeded { .. } => "E_ORACLE_SIZE",
            Error::Numerical(_) => "E_NUMERICAL",
            Error::EmbeddingNotNonnegative { .. } => "E_EMBEDDING",
            Error::ZeroVariance => "E_ZERO_VARIANCE",
            Error::DegenerateIncrement { .. } => "E_DEGENERATE",
            Error::InsufficientScales { .. } => "E_SCALES",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
