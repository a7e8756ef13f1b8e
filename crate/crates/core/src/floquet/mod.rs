//! Truncated Floquet space: basis bookkeeping, Hamiltonian assembly,
//! diagonalization, propagators, formalized observables and the
//! brute-force time-stepping oracle.
//!
//! Basis ordering is mode-major, spin-minor, with modes ascending from
//! -K to K: row index = (n + K) * 2 + p.

mod density;
mod eigen;
mod mode;
mod operator;
mod oracle;

pub use density::{evolve, FloquetDensity};
pub use eigen::{diagonalize, floquet_propagator, FloquetEigensystem};
pub(crate) use mode::epsilon;
pub use mode::{FloquetIndex, ModeTruncation};
pub use operator::{
    assemble_floquet_hamiltonian, contract_propagator, detection_operator, formalize_observable,
    FloquetOperator,
};
pub use oracle::stepped_propagator_oracle;
