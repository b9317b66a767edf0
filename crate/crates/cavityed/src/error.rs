//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an out-of-range parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A quantity was requested outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched vector/operator dimensions.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Evaluation hit a bare Coulomb singularity.
    #[error("singular evaluation: {0}")]
    Singularity(String),

    /// Inconsistent model configuration (gauge/flag/grid combinations).
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
