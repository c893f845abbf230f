use crate::error::{check_len, Error, Result};
use crate::types::Trajectory;

/// Default rolling window as a fraction of the grid length.
pub const DEFAULT_WINDOW_FRAC: f64 = 0.1;

/// Window length for a fraction of `n` samples, kept within `[3, n]`.
pub fn window_for_fraction(n: usize, frac: f64) -> usize {
    ((frac * n as f64).round() as usize).clamp(3, n)
}

/// Pearson correlation over every stride-1 window of length `window`.
///
/// Windows where either side is constant yield `NaN`, so the output always
/// has `n - window + 1` entries.
pub fn rolling_correlation(a: &Trajectory, b: &Trajectory, window: usize) -> Result<Vec<f64>> {
    check_len(a.grid().len(), b.grid().len())?;
    let n = a.values().len();
    if window < 3 || window > n {
        return Err(Error::Parameter(format!("window must lie in [3, {n}], got {window}")));
    }
    Ok(a.values()
        .windows(window)
        .zip(b.values().windows(window))
        .map(|(x, y)| pearson(x, y))
        .collect())
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

pub(crate) fn pearson(x: &[f64], y: &[f64]) -> f64 {
    if is_constant(x) || is_constant(y) {
        return f64::NAN;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}
