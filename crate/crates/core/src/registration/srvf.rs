use crate::error::{check_len, Result};
use crate::preprocess::derivative_values;
use crate::types::{cumulative_trapz, interp_uniform, SrvfCurve, Trajectory, Warping};

/// Square-root velocity transform `q = sign(β̇)·sqrt(|β̇|)`.
///
/// Points where the derivative vanishes map to zero.
pub fn to_srvf(traj: &Trajectory) -> SrvfCurve {
    let d = derivative_values(traj.values(), traj.grid().step());
    let q = d.into_iter().map(signed_sqrt).collect();
    SrvfCurve::new(traj.grid().clone(), q).expect("finite derivative")
}

#[inline]
fn signed_sqrt(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().sqrt()
    }
}

/// Inverse transform: `β(t) = β₀ + ∫₀ᵗ q|q| ds`.
pub fn from_srvf(q: &SrvfCurve, beta0: f64) -> Trajectory {
    let vel: Vec<f64> = q.values().iter().map(|v| v * v.abs()).collect();
    let values = cumulative_trapz(&vel, q.grid().step()).into_iter().map(|v| v + beta0).collect();
    Trajectory::new(q.grid().clone(), values).expect("finite integral")
}

/// Group action `(q, γ) ↦ (q∘γ)·sqrt(γ̇)`.
pub fn group_action(q: &SrvfCurve, w: &Warping) -> Result<SrvfCurve> {
    check_len(q.grid().len(), w.grid().len())?;
    let slope = warp_slope(w);
    let out = w
        .values()
        .iter()
        .zip(&slope)
        .map(|(&g, &s)| interp_uniform(q.values(), g) * s.sqrt())
        .collect();
    SrvfCurve::new(q.grid().clone(), out)
}

/// `γ̇` by finite differences, clamped at zero.
pub(crate) fn warp_slope(w: &Warping) -> Vec<f64> {
    derivative_values(w.values(), w.grid().step()).into_iter().map(|d| d.max(0.0)).collect()
}

/// Applies a warping to a signal: `t ↦ β(γ(t))`.
pub fn warp_trajectory(traj: &Trajectory, w: &Warping) -> Result<Trajectory> {
    check_len(traj.grid().len(), w.grid().len())?;
    let values = w.values().iter().map(|&g| interp_uniform(traj.values(), g)).collect();
    traj.with_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TimeGrid;
    use std::f64::consts::PI;

    #[test]
    fn srvf_of_line_and_constant() {
        let g = TimeGrid::new(51).unwrap();
        let q = to_srvf(&Trajectory::from_fn(g.clone(), |t| t).unwrap());
        assert!(q.values().iter().all(|v| (v - 1.0).abs() < 1e-9));
        let q = to_srvf(&Trajectory::new(g.clone(), vec![-2.0; 51]).unwrap());
        assert!(q.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn srvf_of_parabola() {
        let g = TimeGrid::new(201).unwrap();
        let q = to_srvf(&Trajectory::from_fn(g.clone(), |t| t * t).unwrap());
        for (t, v) in g.points().iter().zip(q.values()) {
            assert!((v - (2.0 * t).sqrt()).abs() <= 1e-2, "t={t} q={v}");
        }
    }

    #[test]
    fn srvf_sign_follows_derivative() {
        let g = TimeGrid::new(101).unwrap();
        let q = to_srvf(&Trajectory::from_fn(g.clone(), |t| -3.0 * t).unwrap());
        assert!(q.values().iter().all(|v| (v + 3f64.sqrt()).abs() < 1e-9));
    }

    #[test]
    fn inverse_examples() {
        let g = TimeGrid::new(101).unwrap();
        let ones = SrvfCurve::new(g.clone(), vec![1.0; 101]).unwrap();
        let b = from_srvf(&ones, 0.0);
        for (t, v) in g.points().iter().zip(b.values()) {
            assert!((v - t).abs() < 1e-9);
        }
        let zeros = SrvfCurve::new(g.clone(), vec![0.0; 101]).unwrap();
        assert!(from_srvf(&zeros, 5.0).values().iter().all(|&v| v == 5.0));
    }

    #[test]
    fn round_trip_sine() {
        let g = TimeGrid::new(201).unwrap();
        let b = Trajectory::from_fn(g.clone(), |t| (2.0 * PI * t).sin()).unwrap();
        let back = from_srvf(&to_srvf(&b), b.values()[0]);
        let rmse = (b
            .values()
            .iter()
            .zip(back.values())
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            / 201.0)
            .sqrt();
        assert!(rmse <= 1e-2, "rmse {rmse}");
    }

    #[test]
    fn group_action_identity_and_closed_form() {
        let g = TimeGrid::new(101).unwrap();
        let q = SrvfCurve::new(g.clone(), g.points().iter().map(|t| (5.0 * t).cos()).collect())
            .unwrap();
        let same = group_action(&q, &Warping::identity(g.clone())).unwrap();
        for (a, b) in same.values().iter().zip(q.values()) {
            assert!((a - b).abs() < 1e-9);
        }

        let ones = SrvfCurve::new(g.clone(), vec![1.0; 101]).unwrap();
        let sq = Warping::from_fn(g.clone(), |t| t * t).unwrap();
        let out = group_action(&ones, &sq).unwrap();
        for (i, (t, v)) in g.points().iter().zip(out.values()).enumerate() {
            if i > 0 && i < 100 {
                assert!((v - (2.0 * t).sqrt()).abs() <= 2e-2);
            }
        }
    }

    #[test]
    fn group_action_grid_mismatch() {
        let q = SrvfCurve::new(TimeGrid::new(5).unwrap(), vec![1.0; 5]).unwrap();
        let w = Warping::identity(TimeGrid::new(7).unwrap());
        assert!(group_action(&q, &w).is_err());
    }
}
