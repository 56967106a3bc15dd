use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at {path}:{line}: {reason}")]
    MalformedRecord {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("malformed curve data: {0}")]
    MalformedCurve(String),

    #[error("fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("all collection sizes are equal; slope is undefined")]
    ZeroVariance,

    #[error("non-positive value at point {index}: N={n}, V={v}")]
    NonPositive { index: usize, n: f64, v: f64 },

    #[error("invalid synthetic corpus spec: {0}")]
    InvalidSpec(String),

    #[error("cannot plot curve '{label}' on log scale: zero value at point {index}")]
    LogOfZero { label: String, index: usize },

    #[error("invalid plot spec: {0}")]
    InvalidPlot(String),

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    #[error("corpus statistics changed under shuffle {shuffle}")]
    ShuffleStatsChanged { shuffle: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
