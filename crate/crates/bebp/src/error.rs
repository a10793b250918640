//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Vector dimensionality does not match what the schema or model expects.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A collection is too small for the requested operation.
    #[error("size error: {0}")]
    Size(String),

    /// A text input failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Stratified sampling asked for more samples than a category holds.
    #[error("quota error: category {category:?} has {available} samples, {requested} requested")]
    Quota {
        category: String,
        available: usize,
        requested: usize,
    },

    /// Training data or geometry is degenerate (single class, coincident points, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Configuration key or value is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// A parameter is outside its documented bounds.
    #[error("bound error: {0}")]
    Bound(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
