use thiserror::Error;

/// Errors surfaced by the simulation layers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-Hermitian Fourier block at mode offset {offset}: max |h^k - (h^-k)^\u{2020}| = {defect:.3e}")]
    NonHermitianBlock { offset: i64, defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("evolution time {periods:.3e} rotor periods exceeds the overflow guard (1e6)")]
    TimeOverflow { periods: f64 },

    #[error("purity |alpha| = {alpha} exceeds 1")]
    PurityOutOfRange { alpha: f64 },

    #[error("mode index {m} outside truncation [-{k}, {k}]")]
    ModeOutOfRange { m: i64, k: i64 },

    #[error("simplified RF propagator invalid: K*omega_r*t_p = {product:.3e} > {limit}")]
    RfApproximationInvalid { product: f64, limit: f64 },

    #[error("sideband sum {sum:.12} short of 1 at K = {k}; increase the truncation")]
    SidebandUnconverged { sum: f64, k: i64 },

    #[error("PASS timing solver failed: best residual {residual:.3e} after {starts} starts")]
    PassSolverFailed { residual: f64, starts: usize },

    #[error("profile weight system numerically singular: condition number {cond:.3e}")]
    SingularWeightSystem { cond: f64 },

    #[error("preparation operator singular on the working subspace")]
    SingularPreparation,

    #[error("{needed} working states needed for an {m}x{m} unitary basis, got {got}")]
    InsufficientWorkingStates { needed: usize, m: usize, got: usize },

    #[error("readout ambiguous: identification margin {margin:.3} < 0.1")]
    AmbiguousReadout { margin: f64 },

    #[error("search failed: identified {identified:?}, marked {marked:?}")]
    SearchFailed {
        identified: (usize, i64),
        marked: (usize, i64),
    },
}
