use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the detector, the evaluation harness and the dataset loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format: {0}")]
    Format(String),

    #[error("image is {width}x{height}, need at least {min}x{min}")]
    Dimension {
        width: usize,
        height: usize,
        min: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("point maps to the plane at infinity")]
    Projection,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dataset error: {0}")]
    Load(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
