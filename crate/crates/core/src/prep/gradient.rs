use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use std::f64::consts::PI;

use crate::floquet::{epsilon, FloquetDensity, FloquetOperator, ModeTruncation};
use crate::linalg::CMat;
use crate::par;
use crate::shift::{effective_isotropic_shift, RotorConfig, SpinParams};

/// One gradient pulse: a dimensionless gradient strength (shift scaling
/// per unit depth) applied for a duration measured in rotor periods.
/// Both are exact rationals so refocusing conditions can be decided
/// without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradientEvent {
    pub g_z: Ratio<i64>,
    pub t_g: Ratio<i64>,
}

impl GradientEvent {
    pub fn new(g_z: Ratio<i64>, t_g: Ratio<i64>) -> Self {
        Self { g_z, t_g }
    }

    pub fn zero() -> Self {
        Self {
            g_z: Ratio::from_integer(0),
            t_g: Ratio::from_integer(0),
        }
    }

    /// Gradient moment g_z t_g; the dressed level (p, n) at depth z
    /// acquires the phase eps_p z pi moment (n + d0/w_r).
    pub fn moment(&self) -> Ratio<i64> {
        self.g_z * self.t_g
    }

    pub fn moment_f64(&self) -> f64 {
        let m = self.moment();
        *m.numer() as f64 / *m.denom() as f64
    }
}

/// Refocusing predicate for the gradient sandwich G1 - pulse - G2,
/// decided exactly in rational arithmetic: the ket-side transfer pathway
/// that sits on dressed level (q, l) during G1 and on (p, k) during G2
/// survives the depth average iff its net depth-dependent phase
/// eps_p k moment2 + eps_q l moment1 vanishes. The isotropic-shift
/// offset d0/w_r is common-mode along a pathway and drops out of this
/// mode-index form.
pub fn gradient_selection_survives(
    p: u8,
    q: u8,
    k: i64,
    l: i64,
    g1: &GradientEvent,
    g2: &GradientEvent,
) -> bool {
    let eps = |p: u8| Ratio::from_integer(if p == 0 { -1i64 } else { 1 });
    eps(p) * Ratio::from_integer(k) * g2.moment() + eps(q) * Ratio::from_integer(l) * g1.moment()
        == Ratio::from_integer(0)
}

/// Propagator of one gradient pulse at fractional depth z, diagonal in
/// the dressed Floquet basis: |p, n> picks up the phase
/// eps_p z pi moment (n + d0 / w_r).
pub fn gradient_propagator(
    event: &GradientEvent,
    params: &SpinParams,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
    z: f64,
) -> FloquetOperator {
    let mu = event.moment_f64();
    let d0_hat = effective_isotropic_shift(params, rotor) / rotor.omega_r;
    let mut u = FloquetOperator::zeros(trunc, rotor.omega_r);
    for n in trunc.modes() {
        let base = ((n + trunc.k) * 2) as usize;
        for p in 0..2u8 {
            let phase = epsilon(p) * z * PI * mu * (n as f64 + d0_hat);
            u.matrix[(base + p as usize, base + p as usize)] = C64::from_polar(1.0, phase);
        }
    }
    u
}

/// Apply the sandwich G1 - pulse - G2 averaged over sample depth.
/// The spin pulse acts identically at every depth; the gradients are
/// depth-dependent diagonal phases. Depths are the midpoints of
/// `z_samples` equal slabs spanning [-1/2, 1/2], so a pathway whose
/// phase coefficient is an even nonzero integer (in units of pi z)
/// averages to exactly zero.
pub fn apply_gradient_sandwich(
    rho: &FloquetDensity,
    g1: &GradientEvent,
    g2: &GradientEvent,
    pulse: &Matrix2<C64>,
    params: &SpinParams,
    rotor: &RotorConfig,
    z_samples: usize,
) -> FloquetDensity {
    assert!(z_samples >= 2, "need at least two depth samples");
    let trunc = rho.truncation;
    let dim = trunc.dim();
    let mut p_full = CMat::zeros(dim, dim);
    for n in trunc.modes() {
        let base = ((n + trunc.k) * 2) as usize;
        for r in 0..2 {
            for c in 0..2 {
                p_full[(base + r, base + c)] = pulse[(r, c)];
            }
        }
    }

    let slabs = par::map_indexed(z_samples, |j| {
        let z = (j as f64 + 0.5) / z_samples as f64 - 0.5;
        let u1 = gradient_propagator(g1, params, rotor, trunc, z);
        let u2 = gradient_propagator(g2, params, rotor, trunc, z);
        let w = &u2.matrix * &p_full * &u1.matrix;
        &w * &rho.matrix * w.adjoint()
    });
    let mut avg = CMat::zeros(dim, dim);
    for s in slabs {
        avg += s;
    }
    avg /= C64::new(z_samples as f64, 0.0);
    FloquetDensity::new(avg, 0.0, None, trunc)
}
