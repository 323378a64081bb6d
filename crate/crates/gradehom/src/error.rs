//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GhError {
    /// Input data violates a structural axiom (bad table, bad module, bad file).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The operation is not defined for this input (wrong field, missing
    /// structural data, out-of-scope shape).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two objects that must live over the same algebra or field do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type GhResult<T> = Result<T, GhError>;
