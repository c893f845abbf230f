//! Shared domain types and the quadrature/interpolation primitives every
//! other module builds on.
//!
//! All curves live on the normalized time domain `[0, 1]`, sampled on a
//! uniform [`TimeGrid`]. Integrals use the trapezoid rule.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Default number of samples on the normalized time axis.
pub const DEFAULT_GRID_N: usize = 101;

/// Uniform sampling of `[0, 1]` with `n >= 3` points, endpoints included.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    points: Arc<[f64]>,
}

impl TimeGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("grid needs at least 3 points, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
        points[0] = 0.0;
        points[n - 1] = 1.0;
        Ok(Self { points: points.into() })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; a grid has at least three points.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing between consecutive points.
    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    #[inline]
    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl PartialEq for TimeGrid {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
    }
}

/// Optional bookkeeping carried alongside a trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub participant_id: Option<String>,
    pub cohort: Option<String>,
    pub trial: Option<String>,
}

/// A scalar signal sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    values: Vec<f64>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        check_len(grid.len(), values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite trajectory value at index {i}")));
        }
        Ok(Self { grid, values, meta: TrajectoryMeta::default() })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn with_meta(mut self, meta: TrajectoryMeta) -> Self {
        self.meta = meta;
        self
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same grid and metadata, new values.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(self.grid.clone(), values)?.with_meta(self.meta.clone()))
    }
}

/// Square-root velocity representation of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SrvfCurve {
    grid: TimeGrid,
    q: Vec<f64>,
}

impl SrvfCurve {
    pub fn new(grid: TimeGrid, q: Vec<f64>) -> Result<Self> {
        check_len(grid.len(), q.len())?;
        if let Some(i) = q.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite SRVF value at index {i}")));
        }
        Ok(Self { grid, q })
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.q, &self.grid)
    }

    /// L2 distance to another curve on the same grid.
    pub fn distance(&self, other: &SrvfCurve) -> Result<f64> {
        check_len(self.q.len(), other.q.len())?;
        let diff: Vec<f64> = self.q.iter().zip(&other.q).map(|(a, b)| a - b).collect();
        Ok(l2_norm(&diff, &self.grid))
    }
}

/// Boundary-preserving, non-decreasing reparametrization of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Warping {
    grid: TimeGrid,
    gamma: Vec<f64>,
}

/// Endpoint slack accepted before pinning to exactly 0 and 1.
const ENDPOINT_TOL: f64 = 1e-9;

impl Warping {
    /// Validates monotonicity and pins the endpoints to exactly 0 and 1.
    pub fn new(grid: TimeGrid, mut gamma: Vec<f64>) -> Result<Self> {
        check_len(grid.len(), gamma.len())?;
        let n = gamma.len();
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidValue("non-finite warping value".into()));
        }
        if gamma[0].abs() > ENDPOINT_TOL || (gamma[n - 1] - 1.0).abs() > ENDPOINT_TOL {
            return Err(Error::InvalidValue(format!(
                "warping must start at 0 and end at 1, got {} and {}",
                gamma[0],
                gamma[n - 1]
            )));
        }
        gamma[0] = 0.0;
        gamma[n - 1] = 1.0;
        for i in 0..n - 1 {
            if gamma[i + 1] < gamma[i] {
                return Err(Error::InvalidValue(format!("warping decreases at index {}", i + 1)));
            }
        }
        Ok(Self { grid, gamma })
    }

    /// Builds a warping from a closure, clamping into `[0, 1]` and enforcing
    /// monotonicity against rounding noise.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut gamma: Vec<f64> = grid.points().iter().map(|&t| f(t).clamp(0.0, 1.0)).collect();
        for i in 1..gamma.len() {
            if gamma[i] < gamma[i - 1] {
                gamma[i] = gamma[i - 1];
            }
        }
        Self::new(grid, gamma)
    }

    pub fn identity(grid: TimeGrid) -> Self {
        let gamma = grid.points().to_vec();
        Self { grid, gamma }
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    /// Largest pointwise deviation from the identity.
    pub fn max_deviation_from_identity(&self) -> f64 {
        self.gamma
            .iter()
            .zip(self.grid.points())
            .map(|(g, t)| (g - t).abs())
            .fold(0.0, f64::max)
    }

    /// Internal constructor for values already known to be valid.
    pub(crate) fn from_valid(grid: TimeGrid, mut gamma: Vec<f64>) -> Self {
        let n = gamma.len();
        gamma[0] = 0.0;
        gamma[n - 1] = 1.0;
        for i in 1..n {
            gamma[i] = gamma[i].clamp(gamma[i - 1], 1.0);
        }
        Self { grid, gamma }
    }
}

/// Amplitude, phase and cosine distances of one curve from a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceTriple {
    pub amplitude: f64,
    pub phase: f64,
    pub cosine: f64,
}

const RANGE_SLACK: f64 = 1e-9;

impl DistanceTriple {
    pub fn new(amplitude: f64, phase: f64, cosine: f64) -> Result<Self> {
        let ok = amplitude.is_finite()
            && phase.is_finite()
            && cosine.is_finite()
            && amplitude >= 0.0
            && (-RANGE_SLACK..=std::f64::consts::FRAC_PI_2 + RANGE_SLACK).contains(&phase)
            && (-RANGE_SLACK..=2.0 + RANGE_SLACK).contains(&cosine);
        if !ok {
            return Err(Error::InvalidValue(format!(
                "distance triple out of range: ({amplitude}, {phase}, {cosine})"
            )));
        }
        Ok(Self { amplitude, phase: phase.max(0.0), cosine: cosine.max(0.0) })
    }
}

/// Trapezoid-rule approximation of `∫₀¹ f(t) g(t) dt`.
pub fn inner_product(f: &[f64], g: &[f64], grid: &TimeGrid) -> Result<f64> {
    check_len(grid.len(), f.len())?;
    check_len(grid.len(), g.len())?;
    Ok(trapz_product(f, g, grid.step()))
}

pub(crate) fn trapz_product(f: &[f64], g: &[f64], h: f64) -> f64 {
    let n = f.len();
    let interior: f64 = (1..n - 1).map(|i| f[i] * g[i]).sum();
    h * (interior + 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]))
}

/// L2 norm under the trapezoid inner product. Panics on length mismatch.
pub fn l2_norm(f: &[f64], grid: &TimeGrid) -> f64 {
    assert_eq!(f.len(), grid.len());
    trapz_product(f, f, grid.step()).max(0.0).sqrt()
}

/// Running trapezoid integral, starting at zero.
pub(crate) fn cumulative_trapz(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in f.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Piecewise-linear interpolation of a trajectory at query points in `[0, 1]`.
pub fn interp_linear(traj: &Trajectory, at: &[f64]) -> Result<Vec<f64>> {
    at.iter()
        .map(|&x| {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Domain(x));
            }
            Ok(interp_uniform(traj.values(), x))
        })
        .collect()
}

/// Linear interpolation of samples on a uniform `[0, 1]` grid. `x` is clamped.
#[inline]
pub(crate) fn interp_uniform(values: &[f64], x: f64) -> f64 {
    let last = values.len() - 1;
    interp_index(values, x.clamp(0.0, 1.0) * last as f64)
}

/// Linear interpolation at fractional index `pos` in `[0, len - 1]`.
#[inline]
pub(crate) fn interp_index(values: &[f64], pos: f64) -> f64 {
    let last = values.len() - 1;
    if pos <= 0.0 {
        return values[0];
    }
    if pos >= last as f64 {
        return values[last];
    }
    let nearest = pos.round();
    if (pos - nearest).abs() < 1e-10 {
        // snap so grid nodes reproduce samples exactly
        return values[nearest as usize];
    }
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    {
        values[i] + frac * (values[i + 1] - values[i])
    }
}

/// Linear interpolation of `(xs, ys)` at `x`, with `xs` non-decreasing.
/// Values outside the range are clamped to the end samples.
pub(crate) fn interp_sorted(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    // first index with xs[idx] >= x
    let idx = xs.partition_point(|&v| v < x);
    let (x0, x1) = (xs[idx - 1], xs[idx]);
    if x1 == x0 {
        return ys[idx];
    }
    let frac = (x - x0) / (x1 - x0);
    ys[idx - 1] + frac * (ys[idx] - ys[idx - 1])
}
