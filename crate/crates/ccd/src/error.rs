//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CcdError {
    /// Mismatched lengths or dimensions between related arguments.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Not enough samples for the requested window / embedding.
    #[error("series too short: {0}")]
    SeriesTooShort(String),

    /// AR coefficients with a characteristic root on or outside the unit circle.
    #[error("unstable AR coefficients: {0}")]
    UnstableAr(String),

    /// Degenerate data (constant series, all-zero histogram, zero-variance noise).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative method failed to converge; never silently clamped.
    #[error("failed to converge: {0}")]
    NonConvergence(String),

    /// Bad benchmark configuration (unknown detector, unknown key, empty grid, ...).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CcdError>;
