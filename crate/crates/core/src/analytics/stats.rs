//! Welch's t-test and simple linear regression, with the Student-t tail
//! evaluated through the regularized incomplete beta function.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Lanczos approximation (g = 7, 9 terms), accurate to ~1e-15 for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta `I_x(a, b)` via Lentz's continued fraction.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x.is_nan() || a <= 0.0 || b <= 0.0 {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 10_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;
    let fix = |v: f64| if v.abs() < TINY { TINY } else { v };

    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / fix(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / fix(1.0 + aa * d);
        c = fix(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / fix(1.0 + aa * d);
        c = fix(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Two-sided tail `P(|T| >= |t|)` of Student's t with `dof` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, dof: f64) -> f64 {
    if t.is_nan() || dof <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    regularized_incomplete_beta(x, 0.5 * dof, 0.5).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub p_value: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub dof: f64,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample t-test without assuming equal variances.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "t-test needs at least 2 samples per group, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue("non-finite sample".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    let diff = ma - mb;
    if se2 == 0.0 {
        if diff == 0.0 {
            return Ok(TTestResult { t_statistic: 0.0, p_value: 1.0, dof: na + nb - 2.0 });
        }
        return Err(Error::DegenerateInput("both samples have zero variance but different means".into()));
    }
    let t = diff / se2.sqrt();
    let dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    Ok(TTestResult { t_statistic: t, p_value: student_t_two_sided_p(t, dof), dof })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
    /// Two-sided p-value for a non-zero slope, `n - 2` degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

/// Ordinary least squares fit `y ≈ slope·x + intercept`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    check_len(x.len(), y.len())?;
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "regression needs at least 3 points, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue("non-finite sample".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRegressor);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r = if syy == 0.0 { 0.0 } else { (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0) };

    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let dof = n - 2.0;
    let p_value = if slope == 0.0 {
        1.0
    } else {
        let se = (sse / dof / sxx).sqrt();
        student_t_two_sided_p(slope / se, dof)
    };
    Ok(RegressionResult { slope, intercept, r, p_value, n: x.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, 1) = x; I_x(a, 1) = x^a; I_x(1, b) = 1 - (1-x)^b
        for &x in &[0.01, 0.2, 0.5, 0.77, 0.99] {
            assert!((regularized_incomplete_beta(x, 1.0, 1.0) - x).abs() < 1e-13);
            assert!((regularized_incomplete_beta(x, 2.5, 1.0) - x.powf(2.5)).abs() < 1e-13);
            assert!(
                (regularized_incomplete_beta(x, 1.0, 3.5) - (1.0 - (1.0 - x).powf(3.5))).abs()
                    < 1e-13
            );
        }
    }

    #[test]
    fn cauchy_tail() {
        // dof = 1: P(|T| > t) = 1 - 2/π·atan(t)
        for &t in &[0.1, 1.0, 3.0, 25.0] {
            let expected = 1.0 - 2.0 / std::f64::consts::PI * f64::atan(t);
            assert!((student_t_two_sided_p(t, 1.0) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn welch_identical_samples() {
        let a = [1.0, 4.0, 2.0, 8.0];
        let r = welch_t_test(&a, &a).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn welch_direct_formula() {
        // means 3 and 6, variances 2.5 and 10:
        // t = -3 / sqrt(0.5 + 2) = -1.8973666, dof = 6.25 / (0.0625 + 1) = 5.8823529
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 4.0, 6.0, 8.0, 10.0];
        let r = welch_t_test(&a, &b).unwrap();
        assert!((r.t_statistic - (-3.0 / 2.5f64.sqrt())).abs() < 1e-12);
        assert!((r.dof - 6.25 / 1.0625).abs() < 1e-12);
        assert!((r.p_value - 0.107_531_194_930_627).abs() < 1e-9, "{}", r.p_value);
    }

    #[test]
    fn welch_errors() {
        assert!(matches!(welch_t_test(&[1.0], &[1.0, 2.0]), Err(Error::InsufficientData(_))));
        assert!(matches!(
            welch_t_test(&[1.0, 1.0], &[2.0, 2.0]),
            Err(Error::DegenerateInput(_))
        ));
        let r = welch_t_test(&[3.0, 3.0], &[3.0, 3.0]).unwrap();
        assert_eq!((r.t_statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn regression_examples() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = linear_regression(&x, &y).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-12 && (r.intercept - 1.0).abs() < 1e-12);
        assert!((r.r - 1.0).abs() < 1e-12);
        assert!(r.p_value < 1e-6);

        let r = linear_regression(&x, &[3.0; 5]).unwrap();
        assert_eq!(r.slope, 0.0);
        assert_eq!(r.r, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-9);

        let r = linear_regression(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 5.0, 8.0]).unwrap();
        assert!((r.slope - 1.9).abs() < 1e-2);
        assert!((r.r - 0.98).abs() < 1e-2);

        assert!(matches!(
            linear_regression(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::DegenerateRegressor)
        ));
        assert!(linear_regression(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn welch_antisymmetric(
            a in proptest::collection::vec(-50.0..50.0f64, 2..12),
            b in proptest::collection::vec(-50.0..50.0f64, 2..12),
        ) {
            if let (Ok(ab), Ok(ba)) = (welch_t_test(&a, &b), welch_t_test(&b, &a)) {
                prop_assert_eq!(ab.t_statistic, -ba.t_statistic);
                prop_assert!((ab.p_value - ba.p_value).abs() <= 1e-12);
                prop_assert!((0.0..=1.0).contains(&ab.p_value));
                prop_assert!(ab.dof > 0.0);
            }
        }

        #[test]
        fn welch_translation_invariant(
            a in proptest::collection::vec(-5.0..5.0f64, 3..10),
            b in proptest::collection::vec(-5.0..5.0f64, 3..10),
            shift in -4.0..4.0f64,
        ) {
            let shifted = |v: &[f64]| v.iter().map(|x| x + shift).collect::<Vec<_>>();
            if let (Ok(r0), Ok(r1)) = (welch_t_test(&a, &b), welch_t_test(&shifted(&a), &shifted(&b))) {
                prop_assert!((r0.t_statistic - r1.t_statistic).abs() <= 1e-12 * (1.0 + r0.t_statistic.abs()));
                prop_assert!((r0.p_value - r1.p_value).abs() <= 1e-12);
            }
        }

        #[test]
        fn regression_residuals_orthogonal(
            pts in proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..30),
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            if let Ok(r) = linear_regression(&x, &y) {
                let resid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - r.intercept - r.slope * a).collect();
                let dot: f64 = resid.iter().zip(&x).map(|(e, a)| e * a).sum();
                let scale: f64 = x.iter().map(|a| a.abs()).sum::<f64>() * y.iter().map(|b| b.abs()).sum::<f64>();
                prop_assert!(dot.abs() <= 1e-9 * (1.0 + scale));
                prop_assert!(r.r * r.r <= 1.0 + 1e-12);
                prop_assert!((0.0..=1.0).contains(&r.p_value));
            }
        }
    }
}
