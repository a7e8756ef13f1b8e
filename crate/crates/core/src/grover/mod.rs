//! Gate construction on a working subspace of Floquet levels and the
//! four-item Grover search: state-transfer unitaries from preparation
//! operators, a complete unitary operator basis, the
//! Hadamard-Walsh / conditional-flip / inversion-about-mean gate set,
//! compiled two-level pulse blocks, and the end-to-end search with
//! spectral readout.

mod basis;
mod gates;
mod search;

pub use basis::{
    expand_in_basis, peak_manipulation_basis, preparation_operator, state_transfer_unitary,
};
pub use gates::{
    conditional_flip, embed_on_levels, hadamard_walsh, inversion_about_mean, operator_distance,
    restrict_to_levels, GateBlock, GateEvent,
};
pub use search::{default_working_states, run_grover, GroverInstance, GroverOutcome};
