//! Reading trial files into filtered trajectories on the common grid.

use std::path::Path;

use rayon::prelude::*;

use elastic_motion::preprocess::{butterworth_lowpass, resample, RawRecording, MIN_RECORDING_SAMPLES};
use elastic_motion::{Trajectory, TrajectoryMeta};

use crate::config::PipelineConfig;
use crate::error::{PipelineError, Result, TrialError};
use crate::manifest::{Manifest, ManifestEntry};

pub const TIME_COLUMN: &str = "time_s";

/// One ingested trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub entry: ManifestEntry,
    pub signal: Trajectory,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    /// Sorted by participant, then trial label.
    pub trials: Vec<Trial>,
    /// Messages for trials dropped under `skip_bad`, in manifest order.
    pub skipped: Vec<String>,
}

/// Reads the `time_s` column and `channel` from a trial CSV.
pub fn read_trial(path: &Path, channel: &str) -> std::result::Result<(Vec<f64>, Vec<f64>), TrialError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => TrialError::MissingFile { path: path.to_path_buf(), source },
            other => TrialError::BadRow { path: path.to_path_buf(), line: 1, message: format!("{other:?}") },
        })?;
    let headers = reader
        .headers()
        .map_err(|e| TrialError::BadRow { path: path.to_path_buf(), line: 1, message: e.to_string() })?
        .clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| TrialError::MissingColumn {
            path: path.to_path_buf(),
            column: name.to_string(),
        })
    };
    let (ti, ci) = (col(TIME_COLUMN)?, col(channel)?);

    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut line = 1;
    for rec in reader.records() {
        let rec = rec.map_err(|e| TrialError::BadRow {
            path: path.to_path_buf(),
            line: e.position().map_or(line + 1, |p| p.line()),
            message: e.to_string(),
        })?;
        line = rec.position().map_or(line + 1, |p| p.line());
        let field = |i: usize, name: &str| -> std::result::Result<f64, TrialError> {
            let s = rec.get(i).unwrap_or("");
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(TrialError::BadRow {
                    path: path.to_path_buf(),
                    line,
                    message: format!("`{name}` is not a finite number: `{s}`"),
                }),
            }
        };
        let t = field(ti, TIME_COLUMN)?;
        let v = field(ci, channel)?;
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(TrialError::NonMonotone { path: path.to_path_buf(), line, value: t });
            }
        }
        times.push(t);
        values.push(v);
    }
    if times.len() < MIN_RECORDING_SAMPLES {
        return Err(TrialError::TooFewSamples {
            path: path.to_path_buf(),
            count: times.len(),
            last_line: line,
            min: MIN_RECORDING_SAMPLES,
        });
    }
    Ok((times, values))
}

/// Read, resample to `grid_n`, then low-pass filter.
pub fn ingest_entry(entry: &ManifestEntry, config: &PipelineConfig) -> Result<Trial> {
    let (times, values) = read_trial(&entry.trial_path, &config.channel)?;
    let rec = RawRecording::new(times, values)?;
    let resampled = resample(&rec, config.grid_n)?;
    let signal = butterworth_lowpass(&resampled, config.filter_order, config.cutoff_ratio)?.with_meta(
        TrajectoryMeta {
            participant_id: Some(entry.participant_id.clone()),
            cohort: Some(entry.cohort.to_string()),
            trial: Some(entry.trial.clone()),
        },
    );
    Ok(Trial { entry: entry.clone(), signal })
}

/// Ingests every manifest entry. With `skip_bad`, failing trials are
/// recorded and dropped; otherwise the first failure (in manifest order)
/// is returned.
pub fn ingest(manifest: &Manifest, config: &PipelineConfig, skip_bad: bool) -> Result<Ingested> {
    let results: Vec<Result<Trial>> =
        manifest.entries.par_iter().map(|e| ingest_entry(e, config)).collect();
    let mut trials = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(t) => trials.push(t),
            Err(e) if skip_bad => skipped.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if trials.is_empty() {
        return Err(PipelineError::NoTrials);
    }
    trials.sort_by(|a, b| {
        (&a.entry.participant_id, &a.entry.trial).cmp(&(&b.entry.participant_id, &b.entry.trial))
    });
    Ok(Ingested { trials, skipped })
}
