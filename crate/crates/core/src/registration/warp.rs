//! Warping-function algebra: composition, inversion, phase distance and the
//! Karcher mean on the sphere of `sqrt(γ̇)` functions.

use crate::error::{check_len, Error, Result};
use crate::types::{cumulative_trapz, interp_sorted, interp_uniform, l2_norm, trapz_product, Warping};

use super::srvf::warp_slope;

/// Phase distance: `arccos(⟨1, sqrt(γ̇)⟩)`, in `[0, π/2]`.
pub fn phase_distance(w: &Warping) -> f64 {
    let psi = sqrt_slope(w);
    let one = vec![1.0; psi.len()];
    let inner = trapz_product(&one, &psi, w.grid().step());
    inner.clamp(-1.0, 1.0).acos().min(std::f64::consts::FRAC_PI_2)
}

/// `sqrt(γ̇)` sampled on the grid.
pub fn sqrt_slope(w: &Warping) -> Vec<f64> {
    warp_slope(w).into_iter().map(f64::sqrt).collect()
}

/// `t ↦ outer(inner(t))`.
pub fn compose(outer: &Warping, inner: &Warping) -> Result<Warping> {
    check_len(outer.grid().len(), inner.grid().len())?;
    let gamma = inner.values().iter().map(|&x| interp_uniform(outer.values(), x)).collect();
    Ok(Warping::from_valid(outer.grid().clone(), gamma))
}

/// Numerical inverse by swapping the axes and re-interpolating on the grid.
pub fn invert(w: &Warping) -> Warping {
    let grid = w.grid();
    let gamma = grid.points().iter().map(|&t| interp_sorted(w.values(), grid.points(), t)).collect();
    Warping::from_valid(grid.clone(), gamma)
}

const KARCHER_MAX_ITER: usize = 100;
const KARCHER_TOL: f64 = 1e-10;

/// Karcher mean of warpings under the Fisher–Rao metric, computed on the
/// unit sphere of `ψ = sqrt(γ̇)` with exponential/log map gradient steps.
pub fn karcher_mean_warping(warps: &[Warping]) -> Result<Warping> {
    let first = warps.first().ok_or(Error::EmptyInput)?;
    let grid = first.grid().clone();
    for w in warps {
        check_len(grid.len(), w.grid().len())?;
    }
    let h = grid.step();
    let psis: Vec<Vec<f64>> = warps.iter().map(|w| normalize(sqrt_slope(w), h)).collect();

    let n = grid.len();
    let mut mu = vec![0.0; n];
    for p in &psis {
        for (m, v) in mu.iter_mut().zip(p) {
            *m += v / psis.len() as f64;
        }
    }
    if l2_norm(&mu, &grid) < 1e-12 {
        return Err(Error::DegenerateInput("warpings have no common direction".into()));
    }
    mu = normalize(mu, h);

    for _ in 0..KARCHER_MAX_ITER {
        let mut vbar = vec![0.0; n];
        for p in &psis {
            let v = sphere_log(&mu, p, h);
            for (a, b) in vbar.iter_mut().zip(&v) {
                *a += b / psis.len() as f64;
            }
        }
        let step = trapz_product(&vbar, &vbar, h).max(0.0).sqrt();
        if step < KARCHER_TOL {
            break;
        }
        mu = sphere_exp(&mu, &vbar, step);
        mu = normalize(mu, h);
    }

    let sq: Vec<f64> = mu.iter().map(|m| m * m).collect();
    let cum = cumulative_trapz(&sq, h);
    let total = cum[n - 1];
    let gamma = cum.into_iter().map(|c| c / total).collect();
    Ok(Warping::from_valid(grid, gamma))
}

fn normalize(mut v: Vec<f64>, h: f64) -> Vec<f64> {
    let norm = trapz_product(&v, &v, h).max(0.0).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

fn sphere_log(mu: &[f64], psi: &[f64], h: f64) -> Vec<f64> {
    let cos = trapz_product(mu, psi, h).clamp(-1.0, 1.0);
    let theta = cos.acos();
    if theta < 1e-12 {
        return vec![0.0; mu.len()];
    }
    let scale = theta / theta.sin();
    mu.iter().zip(psi).map(|(m, p)| scale * (p - cos * m)).collect()
}

fn sphere_exp(mu: &[f64], v: &[f64], norm: f64) -> Vec<f64> {
    let (s, c) = norm.sin_cos();
    mu.iter().zip(v).map(|(m, x)| c * m + s * x / norm).collect()
}
