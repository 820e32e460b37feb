use thiserror::Error;

/// Errors raised by the analytic criteria, the oracle and the data model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("function has {got} values but the space has {expected} atoms")]
    Alignment { expected: usize, got: usize },

    #[error("invalid measure space: {0}")]
    InvalidSpace(String),

    #[error("non-finite value at atom {0}")]
    NonFinite(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hull query has {0} points, brute force supports at most 25")]
    TooManyPoints(usize),

    #[error("invalid tolerances: {0}")]
    Tolerances(String),

    #[error("logic error: {0}")]
    Logic(String),

    #[error("unknown space family `{0}`")]
    UnknownFamily(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
