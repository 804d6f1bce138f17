use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset too small: n = {n}, need at least {required}")]
    DatasetTooSmall { n: usize, required: usize },

    #[error("invalid blob spec: {0}")]
    InvalidBlobSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("no stable plateau in cluster counts: {counts:?}")]
    NoStablePlateau { counts: Vec<usize> },

    #[error("label sequences have different lengths: {left} vs {right}")]
    LabelLengthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
