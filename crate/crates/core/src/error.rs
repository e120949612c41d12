use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: node id {id} is out of bounds for n = {n}")]
    NodeOutOfBounds { line: usize, id: u64, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A privacy budget that makes the estimator undefined (e.g. `eps1 = 0`).
    #[error("degenerate privacy budget: {0}")]
    DegenerateBudget(String),

    #[error("refusing to run: {0}")]
    Guard(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
