use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::orientation::orientation_coefficients;
use super::params::{p2, RotorConfig, SpinParams};
use crate::error::CoreError;
use crate::floquet::{assemble_floquet_hamiltonian, FloquetOperator, ModeTruncation};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

fn minus_iz(scale: f64) -> Matrix2<C64> {
    // -I_z * scale = diag(-scale/2, +scale/2)
    Matrix2::new(
        C64::new(-scale / 2.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(scale / 2.0, 0.0),
    )
}

/// Static (rotor-period-averaged) shift seen by the spin: the isotropic
/// part plus the anisotropic average, which survives only off the magic
/// angle.
pub fn effective_isotropic_shift(params: &SpinParams, rotor: &RotorConfig) -> f64 {
    let e = params.euler;
    let static_aniso = params.delta
        * p2(rotor.theta.cos())
        * (p2(e.beta.cos()) - params.eta / 2.0 * e.beta.sin().powi(2) * (2.0 * e.gamma).cos());
    params.delta0 + static_aniso
}

/// Instantaneous chemical-shift Hamiltonian under sample spinning,
/// -I_z {delta0' + (sqrt3/2) delta xi(w_r t)}; diagonal at all times, so
/// the family commutes with itself.
pub fn cs_hamiltonian(params: &SpinParams, rotor: &RotorConfig, t: f64) -> Matrix2<C64> {
    let co = orientation_coefficients(params, rotor);
    let omega = effective_isotropic_shift(params, rotor)
        + SQRT3_2 * params.delta * co.xi(rotor.omega_r * t);
    minus_iz(omega)
}

/// Floquet Hamiltonian of the spinning chemical shift: static part on the
/// mode diagonal, the xi(t) harmonics as mode-offset +-1 and +-2 blocks.
/// Sine quadratures are included so each Fourier block pair satisfies
/// h^{-k} = (h^k)^dagger.
pub fn cs_floquet_hamiltonian(
    params: &SpinParams,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
) -> Result<FloquetOperator, CoreError> {
    let co = orientation_coefficients(params, rotor);
    let amp = SQRT3_2 * params.delta;
    let mut blocks: BTreeMap<i64, Matrix2<C64>> = BTreeMap::new();
    blocks.insert(0, minus_iz(effective_isotropic_shift(params, rotor)));
    for (k, c, s) in [(1_i64, co.c1, co.s1), (2, co.c2, co.s2)] {
        if c == 0.0 && s == 0.0 {
            continue;
        }
        // cos/sin harmonics -> e^{+-ik w_r t} coefficients (c -+ i s)/2
        let plus = C64::new(c / 2.0, -s / 2.0) * amp;
        let minus = plus.conj();
        blocks.insert(k, minus_iz(1.0) * plus);
        blocks.insert(-k, minus_iz(1.0) * minus);
    }
    assemble_floquet_hamiltonian(&blocks, rotor.omega_r, trunc)
}
