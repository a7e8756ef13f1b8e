use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use crate::floquet::{FloquetDensity, ModeTruncation};
use crate::linalg::CMat;

/// How a spin-space density is embedded into mode space for the initial
/// (thermal) state. Both conventions are in use in formalized Floquet
/// treatments; the center-mode form is the default here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialConvention {
    /// Only the n = 0 mode block is occupied: sigma^F = delta_{0m}
    /// delta_{0n} sigma(0).
    CenterMode,
    /// Every diagonal mode block carries sigma(0): sigma^F = delta_{mn}
    /// sigma(0), renormalized by the mode count so the trace stays 1.
    AllModes,
}

/// Embed a unit-trace spin density into the truncated Floquet space.
pub fn thermal_state(
    sigma0: &Matrix2<C64>,
    trunc: ModeTruncation,
    convention: InitialConvention,
) -> FloquetDensity {
    let tr = sigma0[(0, 0)] + sigma0[(1, 1)];
    assert!(
        (tr - C64::new(1.0, 0.0)).norm() < 1e-9,
        "spin density must have unit trace"
    );
    let dim = trunc.dim();
    let mut m = CMat::zeros(dim, dim);
    match convention {
        InitialConvention::CenterMode => {
            let base = (trunc.k * 2) as usize;
            for r in 0..2 {
                for c in 0..2 {
                    m[(base + r, base + c)] = sigma0[(r, c)];
                }
            }
        }
        InitialConvention::AllModes => {
            let w = C64::new(1.0 / trunc.mode_dim() as f64, 0.0);
            for n in trunc.modes() {
                let base = ((n + trunc.k) * 2) as usize;
                for r in 0..2 {
                    for c in 0..2 {
                        m[(base + r, base + c)] = sigma0[(r, c)] * w;
                    }
                }
            }
        }
    }
    FloquetDensity::new(m, 0.0, None, trunc)
}
