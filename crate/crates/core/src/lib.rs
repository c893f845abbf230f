//! Elastic shape analysis for scalar motion trajectories.
//!
//! Trajectories are registered in the square-root velocity framework: a
//! cohort's elastic mean is estimated by phase-amplitude separation, and
//! every trajectory is scored by its amplitude, phase and cosine distance
//! from that mean. The [`analytics`] module turns those scores into cohort
//! statistics.

pub mod analytics;
pub mod error;
pub mod preprocess;
pub mod registration;
pub mod synthetic;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    inner_product, interp_linear, l2_norm, DistanceTriple, SrvfCurve, TimeGrid, Trajectory,
    TrajectoryMeta, Warping, DEFAULT_GRID_N,
};
