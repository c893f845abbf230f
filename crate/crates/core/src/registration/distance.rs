use crate::error::{check_len, Error, Result};
use crate::types::{l2_norm, trapz_product, Trajectory};

use super::dp::{optimal_warping_with, DEFAULT_MAX_STEP};
use super::srvf::{group_action, to_srvf};

/// Elastic amplitude distance: SRVF residual after warping `b2` onto `b1`.
pub fn amplitude_distance(b1: &Trajectory, b2: &Trajectory) -> Result<f64> {
    amplitude_distance_with(b1, b2, DEFAULT_MAX_STEP)
}

pub fn amplitude_distance_with(b1: &Trajectory, b2: &Trajectory, max_step: usize) -> Result<f64> {
    let q1 = to_srvf(b1);
    let q2 = to_srvf(b2);
    let gamma = optimal_warping_with(&q1, &q2, max_step)?;
    q1.distance(&group_action(&q2, &gamma)?)
}

/// `1 - ⟨b1, b2⟩ / (‖b1‖‖b2‖)`. Meant for already aligned signals.
pub fn cosine_distance(b1: &Trajectory, b2: &Trajectory) -> Result<f64> {
    check_len(b1.grid().len(), b2.grid().len())?;
    cosine_distance_values(b1.values(), b2.values(), b1.grid().step())
}

pub(crate) fn cosine_distance_values(a: &[f64], b: &[f64], h: f64) -> Result<f64> {
    let na = trapz_product(a, a, h).max(0.0).sqrt();
    let nb = trapz_product(b, b, h).max(0.0).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateInput("cosine distance of an all-zero curve".into()));
    }
    let cos = (trapz_product(a, b, h) / (na * nb)).clamp(-1.0, 1.0);
    Ok(1.0 - cos)
}

/// Norm of a trajectory's samples; used to guard degenerate inputs.
pub fn signal_norm(b: &Trajectory) -> f64 {
    l2_norm(b.values(), b.grid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TimeGrid;
    use std::f64::consts::PI;

    #[test]
    fn amplitude_self_is_zero() {
        let g = TimeGrid::new(101).unwrap();
        let b = Trajectory::from_fn(g, |t| (3.0 * t).sin() + t * t).unwrap();
        assert!(amplitude_distance(&b, &b).unwrap() < 1e-6);
    }

    #[test]
    fn amplitude_line_vs_double_line() {
        let g = TimeGrid::new(101).unwrap();
        let b1 = Trajectory::from_fn(g.clone(), |t| t).unwrap();
        let b2 = Trajectory::from_fn(g, |t| 2.0 * t).unwrap();
        let d = amplitude_distance(&b1, &b2).unwrap();
        assert!((d - (2f64.sqrt() - 1.0)).abs() < 0.02, "{d}");
    }

    #[test]
    fn cosine_examples() {
        let g = TimeGrid::new(201).unwrap();
        let s = Trajectory::from_fn(g.clone(), |t| (2.0 * PI * t).sin()).unwrap();
        let c = Trajectory::from_fn(g.clone(), |t| (2.0 * PI * t).cos()).unwrap();
        let neg = Trajectory::from_fn(g.clone(), |t| -(2.0 * PI * t).sin()).unwrap();
        assert!(cosine_distance(&s, &s).unwrap().abs() < 1e-9);
        assert!((cosine_distance(&s, &neg).unwrap() - 2.0).abs() < 1e-9);
        assert!((cosine_distance(&s, &c).unwrap() - 1.0).abs() < 1e-2);
        let zero = Trajectory::new(g, vec![0.0; 201]).unwrap();
        assert!(matches!(cosine_distance(&s, &zero), Err(Error::DegenerateInput(_))));
    }
}
