use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::orientation::orientation_coefficients;
use super::params::{RotorConfig, SpinParams};

pub const DEFAULT_QUADRATURE_POINTS: usize = 512;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// What the numbers in a sideband profile mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Complex field amplitudes F_n.
    FieldAmplitudes,
    /// Intensities A_n = |F_n|^2 (stored with zero imaginary part).
    Intensities,
    /// A desired target profile, e.g. a single selected order.
    Target,
}

/// Sideband amplitudes indexed by order n in [-k, k].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidebandProfile {
    pub k: i64,
    pub values: BTreeMap<i64, C64>,
    pub kind: ProfileKind,
}

impl SidebandProfile {
    pub fn get(&self, n: i64) -> C64 {
        self.values.get(&n).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn sum(&self) -> C64 {
        self.values.values().sum()
    }
}

/// Field amplitudes with their intensities and the convergence summary.
#[derive(Debug, Clone)]
pub struct SidebandSet {
    pub fields: SidebandProfile,
    pub intensities: SidebandProfile,
    /// Sum of retained intensities; 1 at converged truncation (Parseval).
    pub intensity_sum: f64,
    /// False when intensity_sum < 1 - 1e-6: increase the order cutoff.
    pub converged: bool,
}

impl SidebandSet {
    pub fn a(&self, n: i64) -> f64 {
        self.intensities.get(n).re
    }

    pub fn f(&self, n: i64) -> C64 {
        self.fields.get(n)
    }
}

/// Accumulated anisotropic phase (sqrt3/2) delta int_0^t xi, expressed as
/// a function of rotor phase phi = w_r t and normalized to vanish at
/// phi = 0. Dimensionless.
pub fn anisotropic_phase(params: &SpinParams, rotor: &RotorConfig, phi: f64) -> f64 {
    let co = orientation_coefficients(params, rotor);
    SQRT3_2 * params.delta / rotor.omega_r * co.xi_phase_integral(phi)
}

/// Sideband field amplitudes F_n = (1/2pi) int e^{i[-n phi + Phi(phi)]}
/// dphi for |n| <= k, by uniform quadrature with `m_points` nodes (the
/// trapezoid rule is spectrally accurate on the periodic integrand).
pub fn sideband_amplitudes(
    params: &SpinParams,
    rotor: &RotorConfig,
    k: i64,
    m_points: usize,
) -> SidebandSet {
    assert!(m_points >= 64, "need at least 64 quadrature points");
    assert!(m_points.is_power_of_two(), "quadrature size must be a power of two");
    assert!(k >= 0 && (k as usize) < m_points / 2, "order cutoff exceeds quadrature bandwidth");

    let co = orientation_coefficients(params, rotor);
    let scale = SQRT3_2 * params.delta / rotor.omega_r;
    let samples: Vec<C64> = (0..m_points)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / m_points as f64;
            C64::from_polar(1.0, scale * co.xi_phase_integral(phi))
        })
        .collect();

    let mut fields = BTreeMap::new();
    let mut intensities = BTreeMap::new();
    let mut sum = 0.0;
    for n in -k..=k {
        let mut acc = C64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / m_points as f64;
            acc += s * C64::from_polar(1.0, -(n as f64) * phi);
        }
        let f = acc / m_points as f64;
        let a = f.norm_sqr();
        sum += a;
        fields.insert(n, f);
        intensities.insert(n, C64::new(a, 0.0));
    }

    SidebandSet {
        fields: SidebandProfile {
            k,
            values: fields,
            kind: ProfileKind::FieldAmplitudes,
        },
        intensities: SidebandProfile {
            k,
            values: intensities,
            kind: ProfileKind::Intensities,
        },
        intensity_sum: sum,
        converged: sum >= 1.0 - 1e-6,
    }
}

/// Smallest order cutoff K whose retained intensity reaches 1 - 1e-8.
pub fn adaptive_truncation(params: &SpinParams, rotor: &RotorConfig) -> i64 {
    let m = DEFAULT_QUADRATURE_POINTS;
    let probe = sideband_amplitudes(params, rotor, (m / 2 - 1) as i64, m);
    let mut sum = probe.a(0);
    let mut k = 0;
    while sum < 1.0 - 1e-8 {
        k += 1;
        assert!((k as usize) < m / 2, "sideband manifold did not converge");
        sum += probe.a(k) + probe.a(-k);
    }
    k
}
