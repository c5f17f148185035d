use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: missing or malformed header, expected {expected}")]
    Header { path: PathBuf, expected: String },

    #[error("frequency table requires at least one sentence")]
    EmptyCorpus,

    #[error("cue pattern `{0}` has no reference frequency")]
    MissingReferenceFrequency(String),

    #[error("matched cue pattern `{0}` is not present in the frequency table")]
    UnknownPattern(String),

    #[error("frequency tables cover different pattern sets")]
    TableMismatch,

    #[error("triple {0} has no supporting sentences")]
    EmptySupport(String),

    #[error("invalid cue pattern `{pattern}`: {reason}")]
    InvalidPattern { pattern: String, reason: String },

    #[error("frequency {frequency} for `{pattern}` exceeds total sentence count {total}")]
    FrequencyExceedsTotal {
        pattern: String,
        frequency: u64,
        total: u64,
    },

    #[error("no root for the IE equation in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("invalid date range {start}..={end}")]
    DateRange { start: i32, end: i32 },

    #[error("request to {url} failed after {attempts} attempt(s): {message}")]
    Network {
        url: String,
        attempts: u32,
        message: String,
    },

    #[error("response from {url} is not a parseable record set: {message}")]
    MalformedResponse { url: String, message: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
