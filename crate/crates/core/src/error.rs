use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("size limit exceeded: {n} qubits, guard is {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("singular operator (|det| = {det:e})")]
    SingularOperator { det: f64 },

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not of the generic D(1,1,1,1) type: {0}")]
    NotGenericState(String),

    #[error("canonicalization failed: {0}")]
    CanonicalizationFailure(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no closed form covers mu = {0}")]
    NotCovered(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot parse input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
