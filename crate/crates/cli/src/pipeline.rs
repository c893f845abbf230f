//! The cohort pipeline: reference mean, per-trial scores, group statistics,
//! distance matrices and rolling correlations.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use elastic_motion::analytics::{
    linear_regression, pairwise_matrix_with, rolling_correlation, welch_t_test, window_for_fraction,
    DistanceMatrix, Metric, RegressionResult, TTestResult,
};
use elastic_motion::registration::{
    align_to_reference_with, phase_amplitude_separation_with, CosineSpace, RegistrationResult,
};
use elastic_motion::{Trajectory, Warping};

use crate::config::PipelineConfig;
use crate::error::{PipelineError, Result};
use crate::ingest::{ingest, Ingested, Trial};
use crate::manifest::{Cohort, Manifest};
use crate::output;

/// How far a run goes; each stage includes the ones before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Mean,
    Align,
    Distances,
    Stats,
    Report,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub skip_bad: bool,
    pub cosine_space: CosineSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub participant_id: String,
    pub trial: String,
    pub cohort: Cohort,
    pub amplitude: f64,
    pub phase: f64,
    pub cosine: f64,
}

#[derive(Debug, Clone)]
pub struct AlignedTrial {
    pub participant_id: String,
    pub trial: String,
    pub cohort: Cohort,
    pub warp: Warping,
    pub signal: Trajectory,
}

#[derive(Debug, Clone)]
pub struct RollingSeries {
    pub participant_id: String,
    pub trial: String,
    pub t_center: Vec<f64>,
    pub correlation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSummary {
    pub n_curves: usize,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestRow {
    pub metric: Metric,
    pub n_healthy: usize,
    pub n_patients: usize,
    pub result: Option<TTestResult>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Covariate {
    BrookeScore,
    Dynamometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub metric: Metric,
    pub covariate: Covariate,
    /// Trials with a value for the covariate.
    pub n: usize,
    pub result: Option<RegressionResult>,
    pub note: Option<String>,
}

/// Block means of a distance matrix; `None` where a block is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub within_healthy: Option<f64>,
    pub within_patients: Option<f64>,
    pub between: Option<f64>,
    /// `between / within_healthy`.
    pub separation_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSummary {
    pub metric: Metric,
    pub pre: BlockSummary,
    pub post: BlockSummary,
}

/// Everything written to `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortReport {
    pub config: PipelineConfig,
    pub cosine_space: CosineSpace,
    pub n_trials: usize,
    pub n_healthy: usize,
    pub n_patients: usize,
    pub skipped: Vec<String>,
    pub mean: MeanSummary,
    pub ttests: Vec<TTestRow>,
    pub regressions: Vec<RegressionRow>,
    pub matrices: Option<MatrixSummary>,
}

/// In-memory results of a run. Fields past the requested stage are empty.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub stage: Stage,
    pub ingested: Ingested,
    pub reference: RegistrationResult,
    pub aligned: Vec<AlignedTrial>,
    pub distances: Vec<DistanceRow>,
    pub report: Option<CohortReport>,
    pub matrix_pre: Option<DistanceMatrix>,
    pub matrix_post: Option<DistanceMatrix>,
    pub rolling: Vec<RollingSeries>,
}

/// Elastic mean of the healthy trials.
pub fn build_reference(trials: &[Trial], config: &PipelineConfig) -> Result<RegistrationResult> {
    let healthy: Vec<Trajectory> =
        trials.iter().filter(|t| t.entry.cohort.is_healthy()).map(|t| t.signal.clone()).collect();
    if healthy.len() < 2 {
        return Err(PipelineError::NotEnoughHealthy { found: healthy.len() });
    }
    Ok(phase_amplitude_separation_with(&healthy, &config.registration())?)
}

/// Aligns every trial to `mean` and scores it.
pub fn score_trials(
    trials: &[Trial],
    mean: &Trajectory,
    config: &PipelineConfig,
    space: CosineSpace,
) -> Result<(Vec<AlignedTrial>, Vec<DistanceRow>)> {
    let signals: Vec<Trajectory> = trials.iter().map(|t| t.signal.clone()).collect();
    let res = align_to_reference_with(&signals, mean, config.dp_max_slope)?;
    let triples = res.distance_triples(space)?;
    let mut aligned = Vec::with_capacity(trials.len());
    let mut rows = Vec::with_capacity(trials.len());
    for (((t, w), a), d) in trials.iter().zip(res.warps).zip(res.aligned).zip(triples) {
        aligned.push(AlignedTrial {
            participant_id: t.entry.participant_id.clone(),
            trial: t.entry.trial.clone(),
            cohort: t.entry.cohort,
            warp: w,
            signal: a,
        });
        rows.push(DistanceRow {
            participant_id: t.entry.participant_id.clone(),
            trial: t.entry.trial.clone(),
            cohort: t.entry.cohort,
            amplitude: d.amplitude,
            phase: d.phase,
            cosine: d.cosine,
        });
    }
    Ok((aligned, rows))
}

fn metric_value(row: &DistanceRow, metric: Metric) -> f64 {
    match metric {
        Metric::Amplitude => row.amplitude,
        Metric::Phase => row.phase,
        Metric::Cosine => row.cosine,
    }
}

/// Welch tests of healthy vs patient trials for each distance.
pub fn cohort_ttests(rows: &[DistanceRow]) -> Vec<TTestRow> {
    [Metric::Amplitude, Metric::Phase, Metric::Cosine]
        .into_iter()
        .map(|metric| {
            let (h, p): (Vec<&DistanceRow>, Vec<&DistanceRow>) = rows.iter().partition(|r| r.cohort.is_healthy());
            let hv: Vec<f64> = h.iter().map(|r| metric_value(r, metric)).collect();
            let pv: Vec<f64> = p.iter().map(|r| metric_value(r, metric)).collect();
            let (result, note) = match welch_t_test(&hv, &pv) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            TTestRow { metric, n_healthy: hv.len(), n_patients: pv.len(), result, note }
        })
        .collect()
}

/// Amplitude and phase distance against each clinical covariate, over the
/// trials that have it.
pub fn covariate_regressions(trials: &[Trial], rows: &[DistanceRow]) -> Vec<RegressionRow> {
    let mut out = Vec::new();
    for metric in [Metric::Amplitude, Metric::Phase] {
        for covariate in [Covariate::BrookeScore, Covariate::Dynamometry] {
            let (x, y): (Vec<f64>, Vec<f64>) = trials
                .iter()
                .zip(rows)
                .filter_map(|(t, r)| {
                    let x = match covariate {
                        Covariate::BrookeScore => t.entry.brooke_score.map(f64::from),
                        Covariate::Dynamometry => t.entry.dynamometry,
                    };
                    x.map(|x| (x, metric_value(r, metric)))
                })
                .unzip();
            let (result, note) = match linear_regression(&x, &y) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            out.push(RegressionRow { metric, covariate, n: x.len(), result, note });
        }
    }
    out
}

/// Trial order for the matrices: healthy first, then DMD, then SMA; by
/// participant and trial inside each cohort.
fn matrix_order(trials: &[Trial]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..trials.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ea, eb) = (&trials[a].entry, &trials[b].entry);
        (ea.cohort, &ea.participant_id, &ea.trial).cmp(&(eb.cohort, &eb.participant_id, &eb.trial))
    });
    idx
}

fn matrix_labels(trials: &[Trial], order: &[usize]) -> Vec<String> {
    order
        .iter()
        .map(|&i| {
            let e = &trials[i].entry;
            let repeated = trials.iter().filter(|t| t.entry.participant_id == e.participant_id).count() > 1;
            if repeated {
                format!("{}/{}", e.participant_id, e.trial)
            } else {
                e.participant_id.clone()
            }
        })
        .collect()
}

/// Pairwise cosine distances before and after pairwise registration.
pub fn cohort_matrices(trials: &[Trial], config: &PipelineConfig) -> Result<(DistanceMatrix, DistanceMatrix)> {
    let order = matrix_order(trials);
    let curves: Vec<Trajectory> = order.iter().map(|&i| trials[i].signal.clone()).collect();
    let labels = matrix_labels(trials, &order);
    let mut pre = pairwise_matrix_with(&curves, Metric::Cosine, false, config.dp_max_slope)?;
    let mut post = pairwise_matrix_with(&curves, Metric::Cosine, true, config.dp_max_slope)?;
    pre.labels = labels.clone();
    post.labels = labels;
    Ok((pre, post))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// `cohorts` follows the matrix's row order.
pub fn block_summary(m: &DistanceMatrix, cohorts: &[Cohort]) -> BlockSummary {
    let healthy: Vec<usize> = (0..cohorts.len()).filter(|&i| cohorts[i].is_healthy()).collect();
    let patients: Vec<usize> = (0..cohorts.len()).filter(|&i| !cohorts[i].is_healthy()).collect();
    let within_healthy = finite(m.block_mean(&healthy, &healthy));
    let between = finite(m.block_mean(&healthy, &patients));
    let separation_ratio = match (between, within_healthy) {
        (Some(b), Some(w)) if w > 0.0 => Some(b / w),
        _ => None,
    };
    BlockSummary {
        within_healthy,
        within_patients: finite(m.block_mean(&patients, &patients)),
        between,
        separation_ratio,
    }
}

/// Rolling Pearson correlation of each aligned trial with the mean.
pub fn rolling_series(aligned: &[AlignedTrial], mean: &Trajectory, frac: f64) -> Result<Vec<RollingSeries>> {
    let pts = mean.grid().points();
    let window = window_for_fraction(pts.len(), frac);
    let half = (window - 1) as f64 / 2.0;
    let h = mean.grid().step();
    aligned
        .iter()
        .map(|a| {
            let correlation = rolling_correlation(&a.signal, mean, window)?;
            let t_center = (0..correlation.len()).map(|k| pts[k] + half * h).collect();
            Ok(RollingSeries {
                participant_id: a.participant_id.clone(),
                trial: a.trial.clone(),
                t_center,
                correlation,
            })
        })
        .collect()
}

/// Runs the pipeline up to `stage` without writing anything.
pub fn run(manifest_path: &Path, config: &PipelineConfig, opts: RunOptions, stage: Stage) -> Result<Artifacts> {
    let manifest = Manifest::load(manifest_path)?;
    let ingested = ingest(&manifest, config, opts.skip_bad)?;
    let trials = &ingested.trials;
    let reference = build_reference(trials, config)?;

    let mut art = Artifacts {
        stage,
        ingested: ingested.clone(),
        reference,
        aligned: Vec::new(),
        distances: Vec::new(),
        report: None,
        matrix_pre: None,
        matrix_post: None,
        rolling: Vec::new(),
    };
    if stage < Stage::Align {
        return Ok(art);
    }
    let (aligned, distances) = score_trials(trials, &art.reference.mean, config, opts.cosine_space)?;
    art.aligned = aligned;
    art.distances = distances;
    if stage < Stage::Stats {
        return Ok(art);
    }

    let n_healthy = trials.iter().filter(|t| t.entry.cohort.is_healthy()).count();
    let mut report = CohortReport {
        config: config.clone(),
        cosine_space: opts.cosine_space,
        n_trials: trials.len(),
        n_healthy,
        n_patients: trials.len() - n_healthy,
        skipped: ingested.skipped.clone(),
        mean: MeanSummary {
            n_curves: n_healthy,
            iterations: art.reference.iterations,
            converged: art.reference.converged,
        },
        ttests: cohort_ttests(&art.distances),
        regressions: covariate_regressions(trials, &art.distances),
        matrices: None,
    };
    if stage == Stage::Report {
        let (pre, post) = cohort_matrices(trials, config)?;
        let cohorts: Vec<Cohort> = matrix_order(trials).iter().map(|&i| trials[i].entry.cohort).collect();
        report.matrices = Some(MatrixSummary {
            metric: Metric::Cosine,
            pre: block_summary(&pre, &cohorts),
            post: block_summary(&post, &cohorts),
        });
        art.matrix_pre = Some(pre);
        art.matrix_post = Some(post);
        art.rolling = rolling_series(&art.aligned, &art.reference.mean, config.rolling_window_frac)?;
    }
    art.report = Some(report);
    Ok(art)
}

pub const MEAN_FILE: &str = "mean_healthy.csv";
pub const ALIGNED_FILE: &str = "aligned.csv";
pub const DISTANCES_FILE: &str = "distances.csv";
pub const STATS_FILE: &str = "stats.json";
pub const MATRIX_PRE_FILE: &str = "matrix_pre.csv";
pub const MATRIX_POST_FILE: &str = "matrix_post.csv";
pub const ROLLING_DIR: &str = "rolling";

/// Writes the files belonging to `art.stage` into `out_dir`.
pub fn write_artifacts(art: &Artifacts, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = vec![output::write_mean(&out_dir.join(MEAN_FILE), &art.reference.mean)?];
    if art.stage >= Stage::Align {
        written.push(output::write_aligned(&out_dir.join(ALIGNED_FILE), &art.aligned)?);
    }
    if art.stage >= Stage::Distances {
        written.push(output::write_distances(&out_dir.join(DISTANCES_FILE), &art.distances)?);
    }
    if let Some(report) = &art.report {
        written.push(output::write_report(&out_dir.join(STATS_FILE), report)?);
    }
    if let Some(m) = &art.matrix_pre {
        written.push(output::write_matrix(&out_dir.join(MATRIX_PRE_FILE), m)?);
    }
    if let Some(m) = &art.matrix_post {
        written.push(output::write_matrix(&out_dir.join(MATRIX_POST_FILE), m)?);
    }
    if !art.rolling.is_empty() {
        written.extend(output::write_rolling(&out_dir.join(ROLLING_DIR), &art.rolling)?);
    }
    Ok(written)
}

/// Full run: every stage, every output file.
pub fn run_pipeline(manifest_path: &Path, config: &PipelineConfig, out_dir: &Path, opts: RunOptions) -> Result<CohortReport> {
    let art = run(manifest_path, config, opts, Stage::Report)?;
    write_artifacts(&art, out_dir)?;
    Ok(art.report.expect("report stage fills the report"))
}
