use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, PipelineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cohort {
    #[serde(rename = "healthy")]
    Healthy,
    #[serde(rename = "DMD")]
    Dmd,
    #[serde(rename = "SMA")]
    Sma,
}

impl Cohort {
    pub fn is_healthy(self) -> bool {
        self == Cohort::Healthy
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cohort::Healthy => "healthy",
            Cohort::Dmd => "DMD",
            Cohort::Sma => "SMA",
        }
    }
}

impl fmt::Display for Cohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Cohort {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "healthy" => Ok(Cohort::Healthy),
            "DMD" => Ok(Cohort::Dmd),
            "SMA" => Ok(Cohort::Sma),
            other => Err(format!("unknown cohort `{other}` (expected healthy, DMD or SMA)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub participant_id: String,
    pub cohort: Cohort,
    /// Resolved against the manifest's directory.
    pub trial_path: PathBuf,
    /// File stem of `trial_path`, used to label the trial in outputs.
    pub trial: String,
    pub brooke_score: Option<u8>,
    pub dynamometry: Option<f64>,
    /// 1-based line in the manifest file.
    pub line: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub path: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct Row {
    participant_id: String,
    cohort: String,
    trial_path: String,
    #[serde(default)]
    brooke_score: Option<String>,
    #[serde(default)]
    dynamometry: Option<String>,
}

fn optional(field: &Option<String>) -> Option<&str> {
    field.as_deref().map(str::trim).filter(|s| !s.is_empty())
}

impl Manifest {
    /// Reads a manifest CSV with columns `participant_id, cohort, trial_path`
    /// and optional `brooke_score, dynamometry`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let base = path.parent().unwrap_or(Path::new(""));
        let fail = |line: u64, message: String| PipelineError::Manifest {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut entries: Vec<ManifestEntry> = Vec::new();
        let mut seen = HashSet::new();
        for rec in reader.deserialize::<Row>() {
            let row = rec.map_err(|e| {
                let line = e.position().map_or(1, |p| p.line());
                fail(line, e.to_string())
            })?;
            let line = entries.len() as u64 + 2;
            if row.participant_id.is_empty() {
                return Err(fail(line, "empty participant_id".into()));
            }
            let cohort = row.cohort.parse().map_err(|m| fail(line, m))?;
            if row.trial_path.is_empty() {
                return Err(fail(line, "empty trial_path".into()));
            }
            let brooke_score = optional(&row.brooke_score)
                .map(|s| match s.parse::<u8>() {
                    Ok(v @ 1..=6) => Ok(v),
                    _ => Err(fail(line, format!("brooke_score must be an integer in 1..=6, got `{s}`"))),
                })
                .transpose()?;
            let dynamometry = optional(&row.dynamometry)
                .map(|s| match s.parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
                    _ => Err(fail(line, format!("dynamometry must be a non-negative number, got `{s}`"))),
                })
                .transpose()?;
            if !seen.insert((row.participant_id.clone(), row.trial_path.clone())) {
                return Err(fail(
                    line,
                    format!("duplicate trial `{}` for participant `{}`", row.trial_path, row.participant_id),
                ));
            }
            let trial_path = base.join(&row.trial_path);
            let trial = trial_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| row.trial_path.clone());
            entries.push(ManifestEntry {
                participant_id: row.participant_id,
                cohort,
                trial_path,
                trial,
                brooke_score,
                dynamometry,
                line,
            });
        }
        if entries.is_empty() {
            return Err(PipelineError::EmptyManifest { path: path.to_path_buf() });
        }
        Ok(Self { path: path.to_path_buf(), entries })
    }
}
