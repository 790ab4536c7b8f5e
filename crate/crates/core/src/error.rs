use thiserror::Error;

/// Errors raised by scheme construction, evaluation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate scheme: SNR denominator {denominator:e} is numerically zero")]
    Singular { denominator: f64 },

    #[error("blocklength N = {0} is not supported here (N >= 2 required)")]
    UnsupportedBlocklength(usize),

    #[error("root not found: {0}")]
    RootNotFound(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics (as opposed to bad inputs).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::RootNotFound(_))
    }
}
