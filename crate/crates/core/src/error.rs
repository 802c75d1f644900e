//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by deterministic operations and estimator setup.
///
/// Measure-zero sampling degeneracies (rank-deficient gradients, repeated
/// roots, singular quadrics) are *not* errors: estimators resample and count
/// them in [`crate::mc::EstimateRecord::discarded`].
#[derive(Debug, Error)]
pub enum LabError {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix that must have full rank failed the rank tolerance.
    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    /// Dimensions of the operands do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A configuration value failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// The requested combination of parameters is not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
