//! Spectral readout of Floquet levels: dressed states, closed-form and
//! density-matrix FIDs, Fourier transformation, powder averaging, and
//! state identification by spectral matching.

pub mod dressed;
mod fid;
mod identify;
mod powder;
mod spectrum;

pub use dressed::{dressed_density, floquet_level_state};
pub use fid::{
    analytic_fid, default_dwell, quadrature_detection, simulate_fid, simulate_fid_windowed,
    windowed_quadrature_detection, Detection, FidTrace, DEFAULT_FID_POINTS,
};
pub use identify::{identify_state, Identification, ReferenceLibrary};
pub use powder::{powder_fid, powder_spectrum, PowderGrid, DEFAULT_POWDER_POINTS};
pub use spectrum::{phase_absorptive, spectrum_of, Spectrum};
