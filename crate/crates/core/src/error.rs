use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("line {line}: label {label} is not 0 or 1")]
    InvalidLabel { line: usize, label: i64 },

    #[error("document `{0}` has no label")]
    Unlabeled(String),

    #[error("dataset must contain both classes")]
    SingleClass,

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("duplicate pattern {0}")]
    DuplicatePattern(String),

    #[error("framework graph contains a cycle")]
    Cycle,

    #[error("unknown group property GP{0}")]
    UnknownProperty(u8),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("argument `{0}` is not in the framework")]
    ArgumentNotFound(String),

    #[error("empty input")]
    EmptyInput,

    #[error("zero variance")]
    ZeroVariance,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
