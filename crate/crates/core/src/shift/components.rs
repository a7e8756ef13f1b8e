use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::orientation::orientation_coefficients;
use super::params::{RotorConfig, SpinParams};
use crate::floquet::ModeTruncation;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Rotor-harmonic components U_n(t) of the chemical-shift propagator:
/// starting the evolution at rotor phase phi0 gives
///   U(t; phi0) = sum_n U_n(t) e^{i n phi0},
/// so the components capture how the propagator depends on where in the
/// rotor cycle the interval begins. They are obtained by Fourier
/// projection over phi0 with `m_points` quadrature nodes (spectrally
/// accurate on the periodic integrand), keeping orders |n| <= trunc.k.
///
/// The Hamiltonian is diagonal at all times, so each component is too:
/// for spin level p the accumulated phase over the interval is
///   -eps_p/2 [delta0' t + (sqrt3/2)(delta/w_r)(Phi(phi0 + w_r t) - Phi(phi0))]
/// with Phi the running integral of xi over rotor phase.
pub fn cs_propagator_components(
    params: &SpinParams,
    rotor: &RotorConfig,
    t: f64,
    trunc: ModeTruncation,
    m_points: usize,
) -> BTreeMap<i64, Matrix2<C64>> {
    assert!(t >= 0.0);
    assert!(m_points >= 64, "need at least 64 quadrature points");
    assert!(
        m_points.is_power_of_two(),
        "quadrature size must be a power of two"
    );
    assert!(
        (trunc.k as usize) < m_points / 2,
        "order cutoff exceeds quadrature bandwidth"
    );

    let co = orientation_coefficients(params, rotor);
    let scale = SQRT3_2 * params.delta / rotor.omega_r;
    let dphi = rotor.omega_r * t;
    // static part is phi0-independent: split it off up front
    let static_phase = super::hamiltonian::effective_isotropic_shift(params, rotor) * t / 2.0;

    // per-level dynamic phase factors sampled over the start phase
    let samples: Vec<[C64; 2]> = (0..m_points)
        .map(|j| {
            let phi0 = 2.0 * std::f64::consts::PI * j as f64 / m_points as f64;
            let acc = scale * (co.xi_phase_integral(phi0 + dphi) - co.xi_phase_integral(phi0));
            // eps_0 = -1, eps_1 = +1
            [C64::from_polar(1.0, acc / 2.0), C64::from_polar(1.0, -acc / 2.0)]
        })
        .collect();

    let stat = [
        C64::from_polar(1.0, static_phase),
        C64::from_polar(1.0, -static_phase),
    ];

    let mut out = BTreeMap::new();
    for n in trunc.modes() {
        let mut acc = [C64::new(0.0, 0.0); 2];
        for (j, s) in samples.iter().enumerate() {
            let phi0 = 2.0 * std::f64::consts::PI * j as f64 / m_points as f64;
            let w = C64::from_polar(1.0, -(n as f64) * phi0);
            acc[0] += s[0] * w;
            acc[1] += s[1] * w;
        }
        let m = m_points as f64;
        let block = Matrix2::new(
            stat[0] * acc[0] / m,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            stat[1] * acc[1] / m,
        );
        // drop numerically empty orders to keep the map sparse
        if block[(0, 0)].norm() > 1e-15 || block[(1, 1)].norm() > 1e-15 {
            out.insert(n, block);
        }
    }
    out
}

/// Reconstruct the propagator for a given start phase from components.
pub fn reconstruct_propagator(
    components: &BTreeMap<i64, Matrix2<C64>>,
    phi0: f64,
) -> Matrix2<C64> {
    let mut u = Matrix2::zeros();
    for (&n, block) in components {
        u += block * C64::from_polar(1.0, n as f64 * phi0);
    }
    u
}
