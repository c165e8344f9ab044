//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by construction, enumeration, and verification entry points.
///
/// Failed *checks* (a theorem that does not hold on an instance) are not
/// errors; they are reported through verdicts and reports. `Error` covers
/// malformed input, type mismatches, exhausted resource caps, and violated
/// preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("quantale mismatch: {0}")]
    QuantaleMismatch(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("invalid quantale: {0}")]
    InvalidQuantale(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid ideal family: {0}")]
    InvalidFamily(String),

    #[error("resource cap exceeded: {what} needed {attempted}, cap {cap}")]
    Resource {
        what: String,
        attempted: usize,
        cap: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("family closure violation: {0}")]
    FamilyClosure(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// Process exit code the CLI maps this error to: resource and input
    /// problems are 2, failed preconditions and closure diagnostics are 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) | Error::FamilyClosure(_) | Error::CrossCheck(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
