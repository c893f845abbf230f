//! Phase-amplitude separation: the elastic (Karcher) mean of a cohort in
//! SRVF space, together with each curve's warping and aligned signal.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::types::{DistanceTriple, SrvfCurve, Trajectory, Warping};

use super::distance::{cosine_distance, cosine_distance_values};
use super::dp::{optimal_warping_with, DEFAULT_MAX_STEP};
use super::srvf::{from_srvf, group_action, to_srvf, warp_trajectory};
use super::warp::{compose, invert, karcher_mean_warping, phase_distance};

pub const DEFAULT_MAX_ITER: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-4;

/// Knobs for alignment and mean estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegistrationOptions {
    pub max_step: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for RegistrationOptions {
    fn default() -> Self {
        Self { max_step: DEFAULT_MAX_STEP, max_iter: DEFAULT_MAX_ITER, tol: DEFAULT_TOL }
    }
}

/// Which representation the cosine distance compares after alignment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CosineSpace {
    /// Aligned signals against the mean signal.
    #[default]
    Signal,
    /// Aligned SRVFs against the mean SRVF.
    Srvf,
}

#[derive(Debug, Clone)]
pub struct RegistrationResult {
    /// Mean shape as a signal.
    pub mean: Trajectory,
    pub mean_srvf: SrvfCurve,
    pub warps: Vec<Warping>,
    /// `input[i] ∘ warps[i]`.
    pub aligned: Vec<Trajectory>,
    /// `(q_i, warps[i])` under the group action.
    pub aligned_srvf: Vec<SrvfCurve>,
    pub iterations: usize,
    pub converged: bool,
}

impl RegistrationResult {
    /// Amplitude, phase and cosine distance of every aligned curve from the mean.
    pub fn distance_triples(&self, space: CosineSpace) -> Result<Vec<DistanceTriple>> {
        let h = self.mean.grid().step();
        self.warps
            .iter()
            .zip(&self.aligned)
            .zip(&self.aligned_srvf)
            .map(|((w, f), q)| {
                let amplitude = self.mean_srvf.distance(q)?;
                let phase = phase_distance(w);
                let cosine = match space {
                    CosineSpace::Signal => cosine_distance(&self.mean, f)?,
                    CosineSpace::Srvf => {
                        cosine_distance_values(self.mean_srvf.values(), q.values(), h)?
                    }
                };
                DistanceTriple::new(amplitude, phase, cosine)
            })
            .collect()
    }
}

fn check_common_grid(curves: &[Trajectory]) -> Result<()> {
    let n = curves.first().ok_or(Error::EmptyInput)?.grid().len();
    for c in curves {
        check_len(n, c.grid().len())?;
    }
    Ok(())
}

fn align_all(mean: &SrvfCurve, qs: &[SrvfCurve], max_step: usize) -> Result<Vec<(Warping, SrvfCurve)>> {
    qs.par_iter()
        .map(|q| {
            let w = optimal_warping_with(mean, q, max_step)?;
            let aligned = group_action(q, &w)?;
            Ok((w, aligned))
        })
        .collect()
}

fn pointwise_mean(qs: &[SrvfCurve]) -> SrvfCurve {
    let n = qs[0].values().len();
    let mut acc = vec![0.0; n];
    for q in qs {
        for (a, v) in acc.iter_mut().zip(q.values()) {
            *a += v;
        }
    }
    let m = qs.len() as f64;
    acc.iter_mut().for_each(|a| *a /= m);
    SrvfCurve::new(qs[0].grid().clone(), acc).expect("mean of finite curves")
}

/// Index of the curve with the smallest summed SRVF distance to the rest.
fn medoid(qs: &[SrvfCurve]) -> Result<usize> {
    let sums: Vec<f64> = qs
        .par_iter()
        .map(|a| qs.iter().map(|b| a.distance(b)).sum::<Result<f64>>())
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, s) in sums.iter().enumerate() {
        if *s < sums[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Elastic mean with default options.
pub fn phase_amplitude_separation(curves: &[Trajectory]) -> Result<RegistrationResult> {
    phase_amplitude_separation_with(curves, &RegistrationOptions::default())
}

/// Alternates alignment to the current mean and averaging of the aligned
/// SRVFs, starting from the medoid, until the relative change of the total
/// squared residual drops to `tol`. The warps are then centered so their
/// Karcher mean is the identity.
pub fn phase_amplitude_separation_with(
    curves: &[Trajectory],
    opts: &RegistrationOptions,
) -> Result<RegistrationResult> {
    check_common_grid(curves)?;
    if opts.max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    let qs: Vec<SrvfCurve> = curves.iter().map(to_srvf).collect();
    let mut mean_q = qs[medoid(&qs)?].clone();

    let mut prev_energy: Option<f64> = None;
    let mut warps = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let pairs = align_all(&mean_q, &qs, opts.max_step)?;
        let mut energy = 0.0;
        for (_, a) in &pairs {
            energy += mean_q.distance(a)?.powi(2);
        }
        let (w, aligned): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        warps = w;
        mean_q = pointwise_mean(&aligned);

        if energy == 0.0 {
            converged = true;
            break;
        }
        if let Some(prev) = prev_energy {
            if (prev - energy).abs() <= opts.tol * prev {
                converged = true;
                break;
            }
        }
        prev_energy = Some(energy);
    }

    // center: γ_i ← γ_i ∘ γ̄⁻¹, q̄ ← (q̄, γ̄⁻¹)
    let center = karcher_mean_warping(&warps)?;
    let center_inv = invert(&center);
    let warps: Vec<Warping> = warps.iter().map(|w| compose(w, &center_inv)).collect::<Result<_>>()?;
    let mean_q = group_action(&mean_q, &center_inv)?;

    let beta0 = curves.iter().map(|c| c.values()[0]).sum::<f64>() / curves.len() as f64;
    let mean = from_srvf(&mean_q, beta0);
    finish(curves, &qs, mean, mean_q, warps, iterations, converged)
}

/// Aligns every curve to a fixed reference without updating it.
pub fn align_to_reference(curves: &[Trajectory], reference: &Trajectory) -> Result<RegistrationResult> {
    align_to_reference_with(curves, reference, DEFAULT_MAX_STEP)
}

pub fn align_to_reference_with(
    curves: &[Trajectory],
    reference: &Trajectory,
    max_step: usize,
) -> Result<RegistrationResult> {
    check_common_grid(curves)?;
    check_len(reference.grid().len(), curves[0].grid().len())?;
    let qs: Vec<SrvfCurve> = curves.iter().map(to_srvf).collect();
    let ref_q = to_srvf(reference);
    let warps = qs
        .par_iter()
        .map(|q| optimal_warping_with(&ref_q, q, max_step))
        .collect::<Result<Vec<_>>>()?;
    finish(curves, &qs, reference.clone(), ref_q, warps, 1, true)
}

fn finish(
    curves: &[Trajectory],
    qs: &[SrvfCurve],
    mean: Trajectory,
    mean_srvf: SrvfCurve,
    warps: Vec<Warping>,
    iterations: usize,
    converged: bool,
) -> Result<RegistrationResult> {
    let aligned = curves
        .iter()
        .zip(&warps)
        .map(|(c, w)| warp_trajectory(c, w))
        .collect::<Result<Vec<_>>>()?;
    let aligned_srvf =
        qs.iter().zip(&warps).map(|(q, w)| group_action(q, w)).collect::<Result<Vec<_>>>()?;
    Ok(RegistrationResult { mean, mean_srvf, warps, aligned, aligned_srvf, iterations, converged })
}
