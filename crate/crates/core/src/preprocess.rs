//! Raw recording → smooth, uniformly resampled trajectory.
//!
//! The chain is resample, zero-phase low-pass, and (inside the SRVF
//! transform) differentiate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::types::{interp_sorted, TimeGrid, Trajectory};

/// Minimum number of samples accepted for a raw recording.
pub const MIN_RECORDING_SAMPLES: usize = 8;

/// Default Butterworth order.
pub const DEFAULT_FILTER_ORDER: usize = 3;

/// Default cutoff as a fraction of the Nyquist frequency.
pub const DEFAULT_CUTOFF_RATIO: f64 = 0.1;

/// A sensor channel as recorded: irregular timestamps in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecording {
    timestamps: Vec<f64>,
    samples: Vec<f64>,
    pub rate_hint: Option<f64>,
}

impl RawRecording {
    pub fn new(timestamps: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        check_len(timestamps.len(), samples.len())?;
        if timestamps.len() < MIN_RECORDING_SAMPLES {
            return Err(Error::InsufficientData(format!(
                "recording has {} samples, need at least {MIN_RECORDING_SAMPLES}",
                timestamps.len()
            )));
        }
        validate_samples(&timestamps, &samples)?;
        Ok(Self { timestamps, samples, rate_hint: None })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Duration covered by the recording in seconds.
    pub fn span(&self) -> f64 {
        self.timestamps[self.timestamps.len() - 1] - self.timestamps[0]
    }
}

fn validate_samples(timestamps: &[f64], samples: &[f64]) -> Result<()> {
    if let Some(i) = timestamps.iter().chain(samples).position(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(format!("non-finite value at position {i}")));
    }
    if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidValue(format!(
            "timestamps not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// Resamples a recording onto a uniform `n`-point grid over its time span.
pub fn resample(rec: &RawRecording, n: usize) -> Result<Trajectory> {
    resample_samples(&rec.timestamps, &rec.samples, n)
}

/// Resampling on bare slices; only needs two distinct, increasing timestamps.
pub fn resample_samples(timestamps: &[f64], samples: &[f64], n: usize) -> Result<Trajectory> {
    check_len(timestamps.len(), samples.len())?;
    let grid = TimeGrid::new(n)?;
    if timestamps.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 distinct timestamps".into()));
    }
    validate_samples(timestamps, samples)?;
    let t0 = timestamps[0];
    let span = timestamps[timestamps.len() - 1] - t0;
    let values = grid
        .points()
        .iter()
        .map(|&u| interp_sorted(timestamps, samples, t0 + u * span))
        .collect();
    Trajectory::new(grid, values)
}

/// Digital filter coefficients, `a[0] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterCoefficients {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

impl FilterCoefficients {
    /// Butterworth low-pass: analog prototype, frequency prewarp, bilinear transform.
    pub fn butterworth_lowpass(order: usize, cutoff_ratio: f64) -> Result<Self> {
        if order == 0 || order > 16 {
            return Err(Error::Parameter(format!("filter order must be in 1..=16, got {order}")));
        }
        if !(cutoff_ratio > 0.0 && cutoff_ratio < 1.0) {
            return Err(Error::Parameter(format!(
                "cutoff ratio must lie in (0, 1), got {cutoff_ratio}"
            )));
        }
        let fs2 = 4.0;
        let warped = fs2 * (std::f64::consts::PI * cutoff_ratio / 2.0).tan();

        let nf = order as f64;
        let poles: Vec<Complex64> = (0..order)
            .map(|k| {
                let m = -(nf - 1.0) + 2.0 * k as f64;
                -Complex64::from_polar(1.0, std::f64::consts::PI * m / (2.0 * nf)) * warped
            })
            .collect();

        let gain_analog = warped.powi(order as i32);
        let denom: Complex64 = poles.iter().map(|p| fs2 - p).product();
        let gain = (Complex64::new(gain_analog, 0.0) / denom).re;

        let digital_poles: Vec<Complex64> = poles.iter().map(|p| (fs2 + p) / (fs2 - p)).collect();
        let zeros = vec![Complex64::new(-1.0, 0.0); order];

        let b = poly(&zeros).into_iter().map(|c| c * gain).collect();
        let a = poly(&digital_poles);
        Ok(Self { b, a })
    }

    /// Squared magnitude response at normalized frequency `w` (fraction of Nyquist).
    pub fn power_response(&self, w: f64) -> f64 {
        let z = Complex64::from_polar(1.0, -std::f64::consts::PI * w);
        let eval = |c: &[f64]| {
            c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
        };
        (eval(&self.b) / eval(&self.a)).norm_sqr()
    }

    /// Steady-state initial conditions for a unit step input.
    fn step_initial_state(&self) -> Vec<f64> {
        let order = self.a.len() - 1;
        let mut m = DMatrix::<f64>::identity(order, order);
        // I - companion(a)^T
        for r in 0..order {
            m[(r, 0)] += self.a[r + 1];
            if r + 1 < order {
                m[(r, r + 1)] -= 1.0;
            }
        }
        let rhs = DVector::from_iterator(
            order,
            (1..=order).map(|i| self.b[i] - self.a[i] * self.b[0]),
        );
        m.lu().solve(&rhs).map(|v| v.iter().copied().collect()).unwrap_or_else(|| vec![0.0; order])
    }

    /// Direct-form II transposed filtering with explicit initial state.
    fn apply(&self, x: &[f64], mut state: Vec<f64>) -> Vec<f64> {
        let order = self.a.len() - 1;
        let mut y = Vec::with_capacity(x.len());
        for &xi in x {
            let yi = self.b[0] * xi + state[0];
            for k in 0..order {
                let next = if k + 1 < order { state[k + 1] } else { 0.0 };
                state[k] = next + self.b[k + 1] * xi - self.a[k + 1] * yi;
            }
            y.push(yi);
        }
        y
    }

    /// Forward-backward (zero-phase) filtering with odd reflection of
    /// `pad` samples at each edge.
    pub fn filtfilt(&self, x: &[f64], pad: usize) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let pad = pad.min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let zi = self.step_initial_state();
        let scaled = |v: f64| zi.iter().map(|z| z * v).collect::<Vec<_>>();

        let mut y = self.apply(&ext, scaled(ext[0]));
        y.reverse();
        let mut y = self.apply(&y, scaled(y[0]));
        y.reverse();
        y[pad..pad + n].to_vec()
    }
}

/// Coefficients of the monic polynomial with the given roots, real parts only.
fn poly(roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= ci * r;
        }
        c = next;
    }
    c.into_iter().map(|v| v.re).collect()
}

/// Zero-phase Butterworth low-pass on a trajectory. `cutoff_ratio` is the
/// cutoff as a fraction of Nyquist; edges are padded by `3 * order` samples.
pub fn butterworth_lowpass(traj: &Trajectory, order: usize, cutoff_ratio: f64) -> Result<Trajectory> {
    let coeffs = FilterCoefficients::butterworth_lowpass(order, cutoff_ratio)?;
    let y = coeffs.filtfilt(traj.values(), 3 * order);
    traj.with_values(y)
}

/// Derivative with respect to normalized time: central differences inside,
/// second-order one-sided differences at both ends.
pub fn derivative(traj: &Trajectory) -> Trajectory {
    let d = derivative_values(traj.values(), traj.grid().step());
    traj.with_values(d).expect("derivative of finite samples is finite")
}

pub(crate) fn derivative_values(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    debug_assert!(n >= 3);
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sinusoid(n: usize, cycles_per_sample: f64) -> Trajectory {
        let grid = TimeGrid::new(n).unwrap();
        let values = (0..n).map(|i| (2.0 * PI * cycles_per_sample * i as f64).sin()).collect();
        Trajectory::new(grid, values).unwrap()
    }

    fn central_amplitude(x: &[f64]) -> f64 {
        let n = x.len();
        let body = &x[n / 10..n - n / 10];
        let rms = (body.iter().map(|v| v * v).sum::<f64>() / body.len() as f64).sqrt();
        rms * 2f64.sqrt()
    }

    #[test]
    fn resample_uniform_is_identity() {
        let ts: Vec<f64> = (0..10).map(|i| i as f64 * 0.005).collect();
        let xs: Vec<f64> = (0..10).map(|i| ((i * 7) % 5) as f64).collect();
        let rec = RawRecording::new(ts, xs.clone()).unwrap();
        let tr = resample(&rec, 10).unwrap();
        for (a, b) in tr.values().iter().zip(&xs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_hand_example() {
        let tr = resample_samples(&[0.0, 1.0, 3.0], &[0.0, 1.0, 3.0], 5).unwrap();
        let expected = [0.0, 0.75, 1.5, 2.25, 3.0];
        for (a, b) in tr.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn resample_linear_exact() {
        let ts = vec![0.0, 0.1, 0.15, 0.4, 0.41, 0.7, 0.9, 1.3, 2.0];
        let xs: Vec<f64> = ts.iter().map(|t| 3.0 * t - 1.0).collect();
        let rec = RawRecording::new(ts, xs).unwrap();
        let tr = resample(&rec, 37).unwrap();
        for (u, v) in tr.grid().points().iter().zip(tr.values()) {
            assert!((v - (3.0 * (u * 2.0) - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_errors() {
        assert!(matches!(
            resample_samples(&[1.0], &[2.0], 5),
            Err(Error::InsufficientData(_))
        ));
        assert!(resample_samples(&[0.0, 0.0], &[1.0, 2.0], 5).is_err());
        assert!(RawRecording::new(vec![0.0, 1.0, 2.0], vec![1.0; 3]).is_err());
        let ts = vec![0.0, 1.0, 2.0, 3.0, 2.5, 5.0, 6.0, 7.0];
        assert!(RawRecording::new(ts, vec![0.0; 8]).is_err());
    }

    #[test]
    fn filter_rejects_bad_cutoff() {
        let tr = sinusoid(50, 0.01);
        for c in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(butterworth_lowpass(&tr, 3, c), Err(Error::Parameter(_))));
        }
        assert!(butterworth_lowpass(&tr, 0, 0.2).is_err());
    }

    #[test]
    fn filter_constant_unchanged() {
        let grid = TimeGrid::new(101).unwrap();
        let tr = Trajectory::new(grid, vec![4.25; 101]).unwrap();
        let y = butterworth_lowpass(&tr, 3, 0.1).unwrap();
        for v in y.values() {
            assert!((v - 4.25).abs() < 1e-9);
        }
    }

    #[test]
    fn butterworth_matches_analog_magnitude_at_cutoff() {
        for order in 1..=6 {
            let c = FilterCoefficients::butterworth_lowpass(order, 0.2).unwrap();
            assert!((c.power_response(0.0) - 1.0).abs() < 1e-12);
            assert!((c.power_response(0.2) - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn sinusoid_at_cutoff_halved() {
        // cutoff 0.1 of Nyquist = 0.05 cycles/sample
        let tr = sinusoid(4001, 0.05);
        let y = butterworth_lowpass(&tr, 3, 0.1).unwrap();
        let ratio = central_amplitude(y.values()) / central_amplitude(tr.values());
        assert!((ratio - 0.5).abs() < 0.025, "ratio {ratio}");
    }

    #[test]
    fn octave_above_cutoff_attenuated() {
        let tr = sinusoid(4001, 0.1);
        let y = butterworth_lowpass(&tr, 3, 0.1).unwrap();
        let ratio = central_amplitude(y.values()) / central_amplitude(tr.values());
        let db = 20.0 * ratio.log10();
        assert!(db <= -30.0, "attenuation only {db} dB");
    }

    #[test]
    fn filter_preserves_grid() {
        let tr = sinusoid(64, 0.02);
        let y = butterworth_lowpass(&tr, 4, 0.3).unwrap();
        assert_eq!(y.grid(), tr.grid());
        assert_eq!(y.values().len(), 64);
    }

    #[test]
    fn derivative_examples() {
        let grid = TimeGrid::new(51).unwrap();
        let lin = Trajectory::from_fn(grid.clone(), |t| 2.5 * t - 1.0).unwrap();
        for d in derivative(&lin).values() {
            assert!((d - 2.5).abs() < 1e-9);
        }
        let flat = Trajectory::new(grid, vec![3.0; 51]).unwrap();
        assert!(derivative(&flat).values().iter().all(|&d| d == 0.0));

        let grid = TimeGrid::new(201).unwrap();
        let s = Trajectory::from_fn(grid.clone(), |t| (2.0 * PI * t).sin()).unwrap();
        let d = derivative(&s);
        for (t, v) in grid.points().iter().zip(d.values()) {
            assert!((v - 2.0 * PI * (2.0 * PI * t).cos()).abs() < 1e-2);
        }
    }

    #[test]
    fn filter_and_resample_commute_on_smooth_input() {
        // band-limited: 2 cycles over 2 s, well below cutoff
        let ts: Vec<f64> = (0..400).map(|i| i as f64 / 200.0).collect();
        let xs: Vec<f64> = ts.iter().map(|t| (PI * t).sin() + 0.3 * (2.0 * PI * t).cos()).collect();
        let rec = RawRecording::new(ts.clone(), xs.clone()).unwrap();

        let a = butterworth_lowpass(&resample(&rec, 101).unwrap(), 3, 0.3).unwrap();

        let raw_grid = TimeGrid::new(400).unwrap();
        let raw = Trajectory::new(raw_grid, xs).unwrap();
        // same physical cutoff at the 4x finer sampling
        let filtered = butterworth_lowpass(&raw, 3, 0.3 * 100.0 / 399.0).unwrap();
        let b = resample_samples(&ts, filtered.values(), 101).unwrap();

        let rms_diff = (a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum::<f64>()
            / 101.0)
            .sqrt();
        let rms = (b.values().iter().map(|y| y * y).sum::<f64>() / 101.0).sqrt();
        assert!(rms_diff / rms < 0.05, "relative rms {}", rms_diff / rms);
    }
}
