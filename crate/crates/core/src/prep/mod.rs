//! Pseudo-pure state preparation: direct construction, thermal initial
//! states, temporal labeling with the five-pulse sideband-separation
//! sequence, spectral profile weights, and gradient-field spatial
//! labeling.

mod gradient;
mod pass;
mod profile;
mod pseudo_pure;
mod thermal;

pub use gradient::{
    apply_gradient_sandwich, gradient_propagator, gradient_selection_survives, GradientEvent,
};
pub use pass::{
    pass_order_coefficients, simulate_pass_fid, solve_pass_sweep, solve_pass_timings, PassFid,
    PassSchedule,
};
pub use profile::{solve_profile_weights, ProfileWeights};
pub use pseudo_pure::{make_pseudo_pure, PseudoPureSpec};
pub use thermal::{thermal_state, InitialConvention};
