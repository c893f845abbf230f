//! Deterministic synthetic trajectories and cohorts.
//!
//! Used by the test suites and benchmarks; every generator takes an explicit
//! seed so outputs are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::registration::warp_trajectory;
use crate::types::{TimeGrid, Trajectory, TrajectoryMeta, Warping};

fn bump(t: f64, center: f64, width: f64) -> f64 {
    (-((t - center) / width).powi(2)).exp()
}

/// Lobe amplitudes of the curl template: flexion peak, flexion flick,
/// extension peak, extension flick.
pub const CURL_LOBES: [f64; 4] = [1.0, 0.8, 0.9, 0.7];

/// Angular-velocity profile of an arm curl with the given lobe amplitudes:
/// two positive peaks on the way up, two negative ones on the way down.
pub fn curl_profile(grid: &TimeGrid, lobes: [f64; 4]) -> Trajectory {
    Trajectory::from_fn(grid.clone(), |t| {
        lobes[0] * bump(t, 0.22, 0.07) + lobes[1] * bump(t, 0.38, 0.06)
            - lobes[2] * bump(t, 0.64, 0.07)
            - lobes[3] * bump(t, 0.80, 0.06)
    })
    .expect("finite template")
}

/// Healthy curl template.
pub fn curl_template(grid: &TimeGrid) -> Trajectory {
    curl_profile(grid, CURL_LOBES)
}

/// Smooth template whose derivative vanishes only at isolated points, so a
/// warping applied to it is identifiable everywhere.
pub fn oscillating_template(grid: &TimeGrid) -> Trajectory {
    use std::f64::consts::PI;
    Trajectory::from_fn(grid.clone(), |t| (2.0 * PI * t).sin() + 0.5 * (5.0 * PI * t).sin() + 0.8 * t)
        .expect("finite template")
}

/// Random warping `γ(t) = t + Σ c_k sin(kπt)/(kπ)` with `Σ|c_k| <= strength < 1`,
/// so the slope stays within `[1 - strength, 1 + strength]`.
pub fn random_warping(grid: &TimeGrid, rng: &mut impl Rng, strength: f64) -> Warping {
    use std::f64::consts::PI;
    let mut c = [0.0f64; 3];
    for v in &mut c {
        *v = rng.random_range(-1.0..1.0);
    }
    let total: f64 = c.iter().map(|v| v.abs()).sum();
    let scale = strength * rng.random_range(0.3..1.0) / total.max(1e-12);
    c.iter_mut().for_each(|v| *v *= scale);
    Warping::from_fn(grid.clone(), |t| {
        t + c.iter().enumerate().map(|(k, ck)| {
            let kp = (k + 1) as f64 * PI;
            ck * (kp * t).sin() / kp
        }).sum::<f64>()
    })
    .expect("monotone by construction")
}

/// Smooth random SRVF-like function: a few random Fourier modes.
pub fn random_smooth_values(grid: &TimeGrid, rng: &mut impl Rng) -> Vec<f64> {
    use std::f64::consts::PI;
    let coef: Vec<(f64, f64)> =
        (0..4).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0 * PI))).collect();
    grid.points()
        .iter()
        .map(|&t| {
            coef.iter()
                .enumerate()
                .map(|(k, (a, ph))| a * (PI * (k + 1) as f64 * t + ph).cos())
                .sum::<f64>()
        })
        .collect()
}

/// One participant of a synthetic cohort.
#[derive(Debug, Clone)]
pub struct SyntheticSubject {
    pub participant_id: String,
    pub cohort: String,
    pub signal: Trajectory,
}

/// Parameters of a planted-effect cohort.
#[derive(Debug, Clone, Copy)]
pub struct CohortSpec {
    pub n_healthy: usize,
    pub n_patients: usize,
    pub grid_n: usize,
    pub warp_strength: f64,
    pub noise_sd: f64,
    /// Multiplier on the two flick lobes for patients; 1 plants no effect.
    pub patient_flick_gain: f64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            n_healthy: 10,
            n_patients: 10,
            grid_n: 401,
            warp_strength: 0.5,
            noise_sd: 0.0,
            patient_flick_gain: 0.2,
        }
    }
}

/// Healthy subjects are warped copies of the curl template; patients are
/// warped copies of a template with damped flick lobes.
pub fn planted_cohort(spec: &CohortSpec, seed: u64) -> Result<Vec<SyntheticSubject>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = TimeGrid::new(spec.grid_n)?;
    let healthy = curl_template(&grid);
    let g = spec.patient_flick_gain;
    let patient = curl_profile(&grid, [CURL_LOBES[0], CURL_LOBES[1] * g, CURL_LOBES[2], CURL_LOBES[3] * g]);
    let noise = Normal::new(0.0, spec.noise_sd.max(0.0)).expect("valid sd");

    let mut out = Vec::with_capacity(spec.n_healthy + spec.n_patients);
    let total = spec.n_healthy + spec.n_patients;
    for i in 0..total {
        let is_healthy = i < spec.n_healthy;
        let base = if is_healthy { &healthy } else { &patient };
        let w = random_warping(&grid, &mut rng, spec.warp_strength);
        let warped = warp_trajectory(base, &w)?;
        let values: Vec<f64> = warped
            .values()
            .iter()
            .map(|v| if spec.noise_sd > 0.0 { v + noise.sample(&mut rng) } else { *v })
            .collect();
        let id = format!("P{:02}", i + 1);
        let cohort = if is_healthy { "healthy" } else if i.is_multiple_of(2) { "DMD" } else { "SMA" };
        let meta = TrajectoryMeta {
            participant_id: Some(id.clone()),
            cohort: Some(cohort.to_string()),
            trial: None,
        };
        out.push(SyntheticSubject {
            participant_id: id,
            cohort: cohort.to_string(),
            signal: Trajectory::new(grid.clone(), values)?.with_meta(meta),
        });
    }
    Ok(out)
}

/// Null cohort: the patients are exact copies of the healthy subjects.
pub fn null_cohort(spec: &CohortSpec, seed: u64) -> Result<Vec<SyntheticSubject>> {
    let healthy_only = CohortSpec { n_patients: 0, ..*spec };
    let mut out = planted_cohort(&healthy_only, seed)?;
    let copies: Vec<SyntheticSubject> = out
        .iter()
        .take(spec.n_patients)
        .enumerate()
        .map(|(k, s)| {
            let i = spec.n_healthy + k;
            let id = format!("P{:02}", i + 1);
            let cohort = if i.is_multiple_of(2) { "DMD" } else { "SMA" };
            let mut signal = s.signal.clone();
            signal.meta.participant_id = Some(id.clone());
            signal.meta.cohort = Some(cohort.to_string());
            SyntheticSubject { participant_id: id, cohort: cohort.to_string(), signal }
        })
        .collect();
    out.extend(copies);
    Ok(out)
}

/// Samples a normalized trajectory as a raw recording of `duration_s`
/// seconds at `rate_hz`.
pub fn to_recording(signal: &Trajectory, duration_s: f64, rate_hz: f64) -> (Vec<f64>, Vec<f64>) {
    let k = (duration_s * rate_hz).round() as usize + 1;
    let times: Vec<f64> = (0..k).map(|i| i as f64 / rate_hz).collect();
    let span = times[k - 1];
    let samples = times
        .iter()
        .map(|t| crate::types::interp_uniform(signal.values(), t / span))
        .collect();
    (times, samples)
}
