mod oracles;

use elastic_motion::analytics::{student_t_two_sided_p, welch_t_test};
use oracles::t_two_sided_by_quadrature;

#[test]
fn t_tail_matches_quadrature() {
    for &dof in &[1.0, 1.7, 3.0, 5.5, 12.0, 40.0] {
        for &t in &[0.0, 0.3, 1.0, 1.964, 2.571, 3.647, 6.0] {
            let p = student_t_two_sided_p(t, dof);
            let oracle = t_two_sided_by_quadrature(t, dof);
            assert!((p - oracle).abs() <= 1e-6, "t={t} dof={dof}: {p} vs {oracle}");
        }
    }
}

#[test]
fn welch_p_consistent_with_quadrature() {
    let a = [0.21, 0.35, 0.18, 0.27, 0.30, 0.24];
    let b = [0.52, 0.33, 0.71, 0.45, 0.38];
    let r = welch_t_test(&a, &b).unwrap();
    let oracle = t_two_sided_by_quadrature(r.t_statistic, r.dof);
    assert!((r.p_value - oracle).abs() <= 1e-6);
}
