use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions {width}x{height}: {reason}")]
    InvalidDimensions {
        width: usize,
        height: usize,
        reason: &'static str,
    },

    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("requested {requested} components but the rank bound is {bound}")]
    RankBound { requested: usize, bound: usize },

    #[error("pipeline {0} requires a fitted PCA model")]
    MissingPca(String),

    #[error("missing specialist for {0}")]
    MissingSpecialist(String),

    #[error("split violation: {0}")]
    SplitViolation(String),

    #[error("unknown artifact kind `{0}`")]
    UnknownKind(String),

    #[error("tearing requires a second frame and fallback synthesis is disabled")]
    MissingAux,

    #[error("output {0} already exists (use --force to overwrite)")]
    OutputExists(PathBuf),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
