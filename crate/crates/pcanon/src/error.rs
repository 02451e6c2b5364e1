//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the pipeline.
///
/// The CLI maps variants onto process exit codes: input problems are 2,
/// a minimal polynomial that does not split is 3, and violated internal
/// invariants (only reachable through the approximate backend) are 4.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("minimal polynomial does not split over the working field; residual factor {residual}")]
    NonSplitField { residual: String },

    #[error("cannot evaluate a sequence with delta terms at negative k = {k}")]
    NegativeEvalOnDelta { k: i64 },

    #[error("conjugate pairing failed: {0}")]
    ConjugacyViolation(String),

    #[error("tail does not match the proposed geometric part at k = {k}")]
    TailMismatch { k: u32 },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
