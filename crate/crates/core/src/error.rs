use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size limit exceeded: {what} needs {size}, limit is {limit}")]
    SizeLimit {
        what: String,
        size: u128,
        limit: u128,
    },

    #[error("point {0} lies outside the promise domain")]
    OutOfPromise(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid embedding: {0}")]
    Embedding(String),

    #[error("malformed rational literal {0:?} (expected \"p/q\" or an integer)")]
    Rational(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
