//! Cohort statistics over registration output.

mod matrix;
mod rolling;
mod stats;

pub use matrix::{pairwise_matrix, pairwise_matrix_with, DistanceMatrix, Metric};
pub use rolling::{rolling_correlation, window_for_fraction, DEFAULT_WINDOW_FRAC};
pub use stats::{
    linear_regression, ln_gamma, regularized_incomplete_beta, student_t_two_sided_p,
    welch_t_test, RegressionResult, TTestResult,
};
