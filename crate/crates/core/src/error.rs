use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown labor state code {0:?}")]
    UnknownState(String),

    #[error("invalid quarter {0:?} (expected YYYY.Q with Q in 1..=4, year >= 1900)")]
    InvalidQuarter(String),

    #[error("invalid {field} value {value:?}")]
    InvalidField { field: &'static str, value: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("missing or unexpected CSV header: expected {expected}, found {found}")]
    Header { expected: String, found: String },

    #[error("empty cohort: no matching observations for quarter {quarter}, filter {filter}")]
    EmptyCohort { quarter: String, filter: String },

    #[error("row {row} is not stochastic: {reason}")]
    NotStochastic { row: usize, reason: String },

    #[error("row {row} sums to zero and cannot be renormalized")]
    ZeroRow { row: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("state index {index} out of range for a {size}-state chain")]
    StateOutOfRange { index: usize, size: usize },

    #[error(
        "expected first passage time from {source_state} to {target} is infinite: \
         trapped in recurrent class {{{}}}",
        trapped_class.join(", ")
    )]
    InfiniteEfpt {
        source_state: String,
        target: String,
        trapped_class: Vec<String>,
    },

    #[error("first-step system is singular (pivot {pivot:e} below 1e-12)")]
    Singular { pivot: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
