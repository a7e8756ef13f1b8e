//! Floquet-space simulation of magic-angle-spinning (MAS) solid-state NMR
//! quantum computing on spin-1/2 chemical-shift systems.
//!
//! The crate is organized around the pipeline of an ensemble quantum
//! computation in Floquet space:
//!
//! - [`floquet`]: truncated Floquet space, Hamiltonian assembly,
//!   diagonalization, propagators and formalized observables, plus the
//!   brute-force stepped-propagator oracle.
//! - [`shift`]: the MAS chemical-shift interaction, orientation
//!   coefficients, sideband amplitudes and RF pulse propagators.
//! - [`prep`]: pseudo-pure state construction by temporal (2D-PASS) and
//!   spatial (gradient) labeling.
//! - [`readout`]: FID/spectrum computation, powder averaging and state
//!   identification.
//! - [`grover`]: gate construction on a working subspace and the N=4
//!   Grover search.
//! - [`validate`]: the cross-module invariant suites used by the CLI.
//!
//! All internal frequencies are angular (rad/s) and times are seconds;
//! Hz and degrees appear only at I/O boundaries.

pub mod error;
pub mod floquet;
pub mod grover;
pub mod linalg;
pub mod par;
pub mod prep;
pub mod readout;
pub mod shift;
pub mod validate;

pub use error::CoreError;
