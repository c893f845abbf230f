//! Independent reference computations used to freeze expected values.
//!
//! Nothing in here calls into the code paths it checks: the path
//! enumeration, warp inversion and t-distribution tail are all computed
//! from scratch.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Linear interpolation of samples on `t_i = i / (n - 1)` by explicit search.
pub fn interp_on_unit_grid(values: &[f64], x: f64) -> f64 {
    let n = values.len();
    let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    if x <= 0.0 {
        return values[0];
    }
    if x >= 1.0 {
        return values[n - 1];
    }
    for i in 0..n - 1 {
        if x >= ts[i] && x <= ts[i + 1] {
            let f = (x - ts[i]) / (ts[i + 1] - ts[i]);
            return values[i] * (1.0 - f) + values[i + 1] * f;
        }
    }
    values[n - 1]
}

/// Discretized cost of a lattice path: for every straight piece, the
/// trapezoid sum over reference nodes of `(q_ref - q_mov(γ)·sqrt(γ̇))²`.
pub fn lattice_path_cost(q_ref: &[f64], q_mov: &[f64], path: &[(usize, usize)]) -> f64 {
    let n = q_ref.len();
    let h = 1.0 / (n - 1) as f64;
    let mut total = 0.0;
    for seg in path.windows(2) {
        let ((k, l), (i, j)) = (seg[0], seg[1]);
        let (tk, tl, ti, tj) = (k as f64 * h, l as f64 * h, i as f64 * h, j as f64 * h);
        let slope = (tj - tl) / (ti - tk);
        for s in k..=i {
            let ts = s as f64 * h;
            let gamma = tl + slope * (ts - tk);
            let e = q_ref[s] - interp_on_unit_grid(q_mov, gamma) * slope.sqrt();
            let w = if s == k || s == i { 0.5 * h } else { h };
            total += w * e * e;
        }
    }
    total
}

/// Minimum cost over every strictly increasing lattice path from `(0, 0)`
/// to `(n-1, n-1)`, by exhaustive enumeration.
pub fn brute_force_min_cost(q_ref: &[f64], q_mov: &[f64]) -> (f64, usize) {
    let n = q_ref.len();
    let mut best = f64::INFINITY;
    let mut count = 0;
    let mut path = vec![(0usize, 0usize)];
    fn walk(
        q_ref: &[f64],
        q_mov: &[f64],
        n: usize,
        path: &mut Vec<(usize, usize)>,
        best: &mut f64,
        count: &mut usize,
    ) {
        let &(k, l) = path.last().unwrap();
        if (k, l) == (n - 1, n - 1) {
            *count += 1;
            let c = lattice_path_cost(q_ref, q_mov, path);
            if c < *best {
                *best = c;
            }
            return;
        }
        for i in k + 1..n {
            for j in l + 1..n {
                // the end node must be reachable
                if (i == n - 1) != (j == n - 1) {
                    continue;
                }
                path.push((i, j));
                walk(q_ref, q_mov, n, path, best, count);
                path.pop();
            }
        }
    }
    walk(q_ref, q_mov, n, &mut path, &mut best, &mut count);
    (best, count)
}

/// Closed-form smooth warp `γ(t) = t + Σ c_k sin(kπt)/(kπ)`.
#[derive(Debug, Clone, Copy)]
pub struct SineWarp {
    pub c: [f64; 3],
}

impl SineWarp {
    /// Draws coefficients from a tiny LCG so the oracle has no shared RNG.
    pub fn from_seed(seed: u64, strength: f64) -> Self {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut c = [next(), next(), next()];
        let total: f64 = c.iter().map(|v| v.abs()).sum();
        let scale = strength * (0.3 + 0.35 * (next() + 1.0)) / total;
        c.iter_mut().for_each(|v| *v *= scale);
        Self { c }
    }

    pub fn eval(&self, t: f64) -> f64 {
        t + self
            .c
            .iter()
            .enumerate()
            .map(|(k, ck)| {
                let kp = (k + 1) as f64 * PI;
                ck * (kp * t).sin() / kp
            })
            .sum::<f64>()
    }

    pub fn slope(&self, t: f64) -> f64 {
        1.0 + self.c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * PI * t).cos()).sum::<f64>()
    }

    /// `γ⁻¹(y)` by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Unnormalized Student-t density after the substitution `x = tan θ`:
/// `(1 + tan²θ/ν)^{-(ν+1)/2} · sec²θ`, bounded for `ν >= 1`.
fn t_kernel(theta: f64, dof: f64) -> f64 {
    let c = theta.cos();
    if c <= 0.0 {
        return if dof > 1.0 { 0.0 } else { dof.sqrt() };
    }
    let x = theta.tan();
    (1.0 + x * x / dof).powf(-(dof + 1.0) / 2.0) / (c * c)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `P(|T| >= |t|)` by quadrature of the density, normalized numerically.
pub fn t_two_sided_by_quadrature(t: f64, dof: f64) -> f64 {
    const N: usize = 400_000;
    let half = PI / 2.0;
    let whole = simpson(|th| t_kernel(th, dof), 0.0, half, N);
    let tail = simpson(|th| t_kernel(th, dof), t.abs().atan(), half, N);
    tail / whole
}
