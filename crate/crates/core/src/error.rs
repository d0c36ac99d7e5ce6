use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A sequence or generating vector was queried past its declared coverage.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// A generating vector is too short for the requested object.
    #[error("generating vector too short: need indices 0..={needed}, have 0..={have}")]
    Length { needed: usize, have: usize },

    /// Arguments violate a documented precondition (bad dimension, |j| > m, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two representatives of the same weighted degree disagree.
    #[error(
        "inconsistent table: weighted degree {degree} has conflicting values {left} and {right}"
    )]
    Inconsistent {
        degree: usize,
        left: String,
        right: String,
    },

    /// A PSD precondition failed; the message carries the refuting evidence.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The tridiagonal eigensolver exceeded its sweep cap.
    #[error("eigensolver failed to converge within {0} sweeps")]
    EigenFailure(usize),

    /// The augmented coefficient came out materially negative.
    #[error("numerical failure: augmented coefficient {c} is materially negative (scale {scale})")]
    NegativeCoefficient { c: f64, scale: f64 },

    /// Scalar or document parsing failed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
