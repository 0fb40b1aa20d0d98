use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bad header {path}: {msg}")]
    Header { path: PathBuf, msg: String },

    #[error("payload size mismatch: expected {expected} bytes, found {found}")]
    PayloadSize { expected: usize, found: usize },

    #[error("non-finite value at (row {row}, col {col}, band {band})")]
    NonFinite { row: usize, col: usize, band: usize },

    #[error("invalid mask label {label} at (row {row}, col {col})")]
    InvalidLabel { label: u8, row: usize, col: usize },

    #[error("invalid dimensions: {0}")]
    Dimensions(String),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("class `{0}` has no labeled pixels")]
    EmptyClass(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error comes from the input data rather than the caller's
    /// arguments.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Parameter(_) | Error::UnknownAttribute(_))
    }
}
