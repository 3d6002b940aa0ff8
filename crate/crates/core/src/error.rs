//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by density validation, block decomposition, path
/// synthesis and the law oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data: breakpoints out of order, knots not strictly
    /// increasing, negative values where none are allowed, unparsable
    /// rationals, and similar shape problems.
    #[error("structural error: {0}")]
    Structural(String),

    /// A parameter outside its documented range.
    #[error("argument error: {0}")]
    Argument(String),

    /// A block collection that fails one of the feasibility checks.
    #[error("infeasible collection: {0}")]
    Infeasible(String),

    /// The density is exactly uniform; it is realized by the single-peak
    /// preset path and has no block representation.
    #[error("uniform case: no block representation needed")]
    UniformDensity,

    /// Requested functionality that the input cannot support, e.g. a
    /// density without an oscillation modulus handed to the mesh builder.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A path audit found a violated structural property.
    #[error("audit failure: {0}")]
    AuditFailure(String),

    /// An internal identity that must hold for feasible inputs was
    /// violated; indicates a bug rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

/// Machine-readable code for the CLI error schema.
impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Structural(_) => "schema_violation",
            Error::Argument(_) => "argument_error",
            Error::Infeasible(_) => "infeasible_collection",
            Error::UniformDensity => "uniform_case",
            Error::Unsupported(_) => "unsupported",
            Error::AuditFailure(_) => "audit_failure",
            Error::Internal(_) => "internal_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
