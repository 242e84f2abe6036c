use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input {input:?}: {reason}")]
    Format { input: String, reason: String },

    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{what} limited to {limit} qubits, requested {requested}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
