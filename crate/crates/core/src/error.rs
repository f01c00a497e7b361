use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dataset needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("non-finite coordinate at point {0}")]
    NonFinitePoint(usize),

    #[error("{path}: malformed row {row}: {reason}")]
    MalformedRow {
        path: PathBuf,
        row: usize,
        reason: String,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("silhouette needs at least 2 clusters, got {0}")]
    TooFewClusters(usize),

    #[error("eigensolver did not converge within {0} iterations")]
    EigenNoConvergence(usize),

    #[error("problem size {size} exceeds limit {limit} for {what}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("graph is not unit-disk embeddable after {restarts} restarts; mismatched pairs: {mismatched:?}")]
    NotUnitDiskEmbeddable {
        restarts: usize,
        mismatched: Vec<(usize, usize)>,
    },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.1e} at t = {time_ns} ns")]
    NormDrift {
        drift: f64,
        tolerance: f64,
        time_ns: f64,
    },

    #[error("time {t} outside waveform domain [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },

    #[error("all {0} objective evaluations failed")]
    AllEvaluationsFailed(usize),

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
