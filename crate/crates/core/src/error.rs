use thiserror::Error;

use crate::algebra::Field;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("invalid curve family: {0}")]
    InvalidFamily(String),

    #[error("partition construction failed: {0}")]
    ConstructionFailure(String),

    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LabError::InvalidInput(msg.into())
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
