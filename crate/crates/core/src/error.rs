use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto exit codes, so the split
/// between `Parse`/`Validation` (bad input) and `Exactness` (cross-checked
/// distances disagree) is load-bearing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Validation(String),

    #[error("index format: {0}")]
    Format(String),

    #[error("exactness violated: {0}")]
    Exactness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
