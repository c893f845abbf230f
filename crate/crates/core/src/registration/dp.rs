//! Dynamic-programming search for the optimal warping between two SRVFs.
//!
//! The search runs over piecewise-linear warps whose breakpoints lie on the
//! `n × n` lattice of grid nodes. Node `(i, j)` means `γ(t_i) = t_j`: `i`
//! indexes the reference curve, `j` the curve being warped. Each edge is a
//! step `(Δi, Δj)` with both components in `1..=max_step` and coprime, which
//! bounds the slope of `γ` to `[1/max_step, max_step]`.
//!
//! The cost of an edge is the trapezoid approximation, over the reference
//! nodes it spans, of `∫ (q_ref(t) - q_mov(γ(t))·sqrt(γ̇))² dt` with `γ`
//! linear on the edge. Edge costs add up along a path, so the DP optimum
//! is exactly the minimum over all lattice paths.

use crate::error::{check_len, Error, Result};
use crate::types::{interp_index, SrvfCurve, Warping};

use super::srvf::group_action;

/// Default bound on a single DP step, which also bounds the warp slope.
pub const DEFAULT_MAX_STEP: usize = 7;

/// Relative tolerance under which two path costs count as a tie.
const TIE_TOL: f64 = 1e-12;

/// Optimal lattice path and its discretized cost.
#[derive(Debug, Clone, PartialEq)]
pub struct DpPath {
    /// Breakpoints `(i, j)` from `(0, 0)` to `(n-1, n-1)`.
    pub nodes: Vec<(usize, usize)>,
    /// Squared L2 residual of the path, as accumulated by the DP.
    pub cost: f64,
}

/// Allowed steps: coprime pairs with both components in `1..=max_step`.
pub fn step_set(max_step: usize) -> Vec<(usize, usize)> {
    let mut steps = Vec::new();
    for di in 1..=max_step {
        for dj in 1..=max_step {
            if gcd(di, dj) == 1 {
                steps.push((di, dj));
            }
        }
    }
    steps
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cost of the straight segment from lattice node `from` to `to`.
pub fn segment_cost(q_ref: &[f64], q_mov: &[f64], from: (usize, usize), to: (usize, usize), h: f64) -> f64 {
    let (k, l) = from;
    let di = to.0 - k;
    let dj = to.1 - l;
    let slope = dj as f64 / di as f64;
    let root = slope.sqrt();
    let mut acc = 0.0;
    for s in 0..=di {
        let pos = l as f64 + s as f64 * slope;
        let e = q_ref[k + s] - root * interp_index(q_mov, pos);
        let w = if s == 0 || s == di { 0.5 } else { 1.0 };
        acc += w * e * e;
    }
    acc * h
}

/// Runs the DP and returns the minimizing lattice path.
///
/// Ties are broken toward the diagonal: among equal-cost predecessors the
/// one nearest the identity wins, then the shorter step.
pub fn dp_optimal_path(q_ref: &SrvfCurve, q_mov: &SrvfCurve, max_step: usize) -> Result<DpPath> {
    let n = q_ref.grid().len();
    check_len(n, q_mov.grid().len())?;
    if max_step == 0 {
        return Err(Error::Parameter("max_step must be at least 1".into()));
    }
    let h = q_ref.grid().step();
    let (a, b) = (q_ref.values(), q_mov.values());
    let steps = step_set(max_step);

    let idx = |i: usize, j: usize| i * n + j;
    let mut cost = vec![f64::INFINITY; n * n];
    let mut pred = vec![usize::MAX; n * n];
    cost[0] = 0.0;

    for i in 1..n {
        for j in 1..n {
            let mut best = f64::INFINITY;
            let mut best_pred = usize::MAX;
            let mut best_key = (usize::MAX, usize::MAX);
            for &(di, dj) in &steps {
                if di > i || dj > j {
                    continue;
                }
                let (k, l) = (i - di, j - dj);
                let base = cost[idx(k, l)];
                if !base.is_finite() {
                    continue;
                }
                let cand = base + segment_cost(a, b, (k, l), (i, j), h);
                let key = (k.abs_diff(l), di + dj);
                let tol = TIE_TOL * best.abs().max(1.0);
                let better = if best.is_infinite() || cand < best - tol {
                    true
                } else {
                    cand <= best + tol && key < best_key
                };
                if better {
                    best = cand;
                    best_pred = idx(k, l);
                    best_key = key;
                }
            }
            cost[idx(i, j)] = best;
            pred[idx(i, j)] = best_pred;
        }
    }

    let end = idx(n - 1, n - 1);
    let mut nodes = vec![(n - 1, n - 1)];
    let mut cur = end;
    while cur != 0 {
        cur = pred[cur];
        debug_assert!(cur != usize::MAX);
        nodes.push((cur / n, cur % n));
    }
    nodes.reverse();
    Ok(DpPath { nodes, cost: cost[end] })
}

impl DpPath {
    /// Samples the piecewise-linear warp on the reference grid.
    pub fn to_warping(&self, q_ref: &SrvfCurve) -> Warping {
        let grid = q_ref.grid().clone();
        let n = grid.len();
        let h = grid.step();
        let mut gamma = vec![0.0; n];
        for seg in self.nodes.windows(2) {
            let ((k, l), (i, j)) = (seg[0], seg[1]);
            let slope = (j - l) as f64 / (i - k) as f64;
            for (s, g) in gamma[k..=i].iter_mut().enumerate() {
                *g = (l as f64 + s as f64 * slope) * h;
            }
        }
        Warping::from_valid(grid, gamma)
    }
}

/// Optimal warping of `q_mov` onto `q_ref` with the default step bound.
pub fn optimal_warping(q_ref: &SrvfCurve, q_mov: &SrvfCurve) -> Result<Warping> {
    optimal_warping_with(q_ref, q_mov, DEFAULT_MAX_STEP)
}

/// Optimal warping with an explicit step (slope) bound.
///
/// The DP objective and the group action differentiate `γ` differently at
/// breakpoints, so the returned warp is checked against the identity under
/// the group action and the identity is kept when it scores lower.
pub fn optimal_warping_with(q_ref: &SrvfCurve, q_mov: &SrvfCurve, max_step: usize) -> Result<Warping> {
    let path = dp_optimal_path(q_ref, q_mov, max_step)?;
    let warp = path.to_warping(q_ref);
    let identity = Warping::identity(q_ref.grid().clone());
    let aligned = group_action(q_mov, &warp)?;
    if q_ref.distance(&aligned)? <= q_ref.distance(q_mov)? {
        Ok(warp)
    } else {
        Ok(identity)
    }
}
