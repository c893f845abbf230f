//! Cohort pipeline around `elastic_motion`: manifest and config parsing,
//! trial ingestion, scoring against a healthy elastic mean, and report files.

pub mod config;
pub mod error;
pub mod ingest;
pub mod manifest;
pub mod output;
pub mod pipeline;

pub use config::{ConfigOverrides, PipelineConfig};
pub use error::{PipelineError, Result, TrialError};
pub use manifest::{Cohort, Manifest, ManifestEntry};
pub use pipeline::{run, run_pipeline, write_artifacts, Artifacts, CohortReport, RunOptions, Stage};
