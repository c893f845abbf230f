//! Elastic registration in the square-root velocity framework.
//!
//! A signal `β` maps to `q = sign(β̇)·sqrt(|β̇|)`. Under this map warping a
//! signal becomes the isometric group action `(q∘γ)·sqrt(γ̇)`, so aligning two
//! curves reduces to an L2 minimization over warpings, solved here by
//! dynamic programming on a lattice.

mod distance;
mod dp;
mod mean;
mod srvf;
mod warp;

pub use distance::{amplitude_distance, amplitude_distance_with, cosine_distance, signal_norm};
pub use dp::{
    dp_optimal_path, optimal_warping, optimal_warping_with, segment_cost, step_set, DpPath,
    DEFAULT_MAX_STEP,
};
pub use mean::{
    align_to_reference, align_to_reference_with, phase_amplitude_separation,
    phase_amplitude_separation_with, CosineSpace, RegistrationOptions, RegistrationResult,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use srvf::{from_srvf, group_action, to_srvf, warp_trajectory};
pub use warp::{compose, invert, karcher_mean_warping, phase_distance, sqrt_slope};
