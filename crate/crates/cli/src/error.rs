use std::path::PathBuf;

use thiserror::Error;

/// Problems with a single trial file. Each carries the file and, where it
/// applies, the 1-based line number.
#[derive(Debug, Error)]
pub enum TrialError {
    #[error("{}: cannot read trial: {source}", path.display())]
    MissingFile { path: PathBuf, source: std::io::Error },

    #[error("{}: line 1: missing column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },

    #[error("{}: line {line}: timestamp {value} does not increase on the previous row", path.display())]
    NonMonotone { path: PathBuf, line: u64, value: f64 },

    #[error("{}: line {line}: {message}", path.display())]
    BadRow { path: PathBuf, line: u64, message: String },

    #[error("{}: line {last_line}: only {count} samples, need at least {min}", path.display())]
    TooFewSamples { path: PathBuf, count: usize, last_line: u64, min: usize },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("invalid config field `{field}`: {message}")]
    ConfigField { field: &'static str, message: String },

    #[error("manifest {}: line {line}: {message}", path.display())]
    Manifest { path: PathBuf, line: u64, message: String },

    #[error("manifest {} has no entries", path.display())]
    EmptyManifest { path: PathBuf },

    #[error(transparent)]
    Trial(#[from] TrialError),

    #[error("cannot build a reference from {found} healthy trial(s); need at least 2")]
    NotEnoughHealthy { found: usize },

    #[error("no trials left after skipping bad ones")]
    NoTrials,

    #[error(transparent)]
    Numeric(#[from] elastic_motion::Error),

    #[error("writing json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> PipelineError {
    let path = path.into();
    move |source| PipelineError::Io { path, source }
}
