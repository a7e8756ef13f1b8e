//! The MAS chemical-shift interaction: tensor conventions, orientation
//! coefficients, the time-domain Hamiltonian and its Floquet matrix
//! elements, sideband Fourier amplitudes, and RF pulse propagators.

mod components;
mod hamiltonian;
mod orientation;
mod params;
mod rf;
mod sidebands;

pub use components::{cs_propagator_components, reconstruct_propagator};
pub use hamiltonian::{cs_floquet_hamiltonian, cs_hamiltonian, effective_isotropic_shift};
pub use orientation::{orientation_coefficients, OrientationCoefficients};
pub use params::{EulerAngles, RotorConfig, SpinParams, MAGIC_ANGLE};
pub use rf::{rf_floquet_propagator, spin_rotation, PulsePhase, RfPulse};
pub use sidebands::{
    adaptive_truncation, anisotropic_phase, sideband_amplitudes, ProfileKind, SidebandProfile,
    SidebandSet, DEFAULT_QUADRATURE_POINTS,
};
