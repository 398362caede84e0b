use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("ambiguous count: k = {k} lies within tolerance of an eigenvalue")]
    AmbiguousCount { k: f64 },

    #[error("solver could not certify completeness: {0}")]
    SolverIncomplete(String),

    #[error("truncation bound undefined: K + 1 - |V| = {shifted} does not exceed 2*lt0 = {threshold}")]
    BoundUndefined { shifted: f64, threshold: f64 },

    #[error("malformed input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
