use num_complex::Complex64 as C64;

use super::fid::{analytic_fid, Detection, FidTrace};
use super::spectrum::{spectrum_of, Spectrum};
use crate::error::CoreError;
use crate::floquet::{FloquetIndex, ModeTruncation};
use crate::par;
use crate::shift::{EulerAngles, RotorConfig, SpinParams};

pub const DEFAULT_POWDER_POINTS: usize = 1154;

/// Orientation ensemble for powder averaging: (Euler angles, weight).
#[derive(Debug, Clone)]
pub struct PowderGrid {
    pub orientations: Vec<(EulerAngles, f64)>,
}

impl PowderGrid {
    /// Equal-area quasi-uniform grid: a spiral (Fibonacci) point set on
    /// the (alpha, beta) sphere with a golden-angle gamma sequence, all
    /// weights equal. Integrates degree-4 surface polynomials to about
    /// 1e-3 at 1000+ points.
    pub fn equal_area(n: usize) -> Self {
        assert!(n >= 2);
        let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let two_pi = 2.0 * std::f64::consts::PI;
        let orientations = (0..n)
            .map(|j| {
                let z = 1.0 - (2.0 * j as f64 + 1.0) / n as f64;
                let beta = z.clamp(-1.0, 1.0).acos();
                let alpha = (j as f64 / golden).fract() * two_pi;
                // a second, independent low-discrepancy sequence for gamma
                let gamma = (j as f64 * (2.0_f64.sqrt() - 1.0)).fract() * two_pi;
                (EulerAngles::new(alpha, beta, gamma), 1.0 / n as f64)
            })
            .collect();
        Self { orientations }
    }

    pub fn user_supplied(orientations: Vec<(EulerAngles, f64)>) -> Self {
        let total: f64 = orientations.iter().map(|&(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-9, "weights must sum to 1");
        Self { orientations }
    }

    pub fn len(&self) -> usize {
        self.orientations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orientations.is_empty()
    }
}

/// Powder-averaged readout trace of a dressed level: the weighted sum of
/// single-orientation closed-form traces. The map over orientations runs
/// in parallel; the reduction is sequential in index order, so the result
/// is identical across thread counts.
pub fn powder_fid(
    idx: FloquetIndex,
    params_template: &SpinParams,
    rotor: &RotorConfig,
    window: ModeTruncation,
    grid: &PowderGrid,
    n_samples: usize,
    dwell: f64,
) -> Result<FidTrace, CoreError> {
    if !window.contains(idx.n) {
        return Err(CoreError::ModeOutOfRange {
            m: idx.n,
            k: window.k,
        });
    }
    let traces = par::map_indexed(grid.len(), |j| {
        let (euler, w) = grid.orientations[j];
        let mut p = *params_template;
        p.euler = euler;
        let fid = analytic_fid(idx, &p, rotor, window, Detection::Quadrature, n_samples, dwell)
            .expect("window checked above");
        (fid.samples, w)
    });
    let mut acc = vec![C64::new(0.0, 0.0); n_samples];
    for (samples, w) in traces {
        for (a, s) in acc.iter_mut().zip(samples) {
            *a += s * C64::new(w, 0.0);
        }
    }
    Ok(FidTrace::new(dwell, acc, Detection::Quadrature))
}

/// Powder-averaged spectrum of a dressed level.
pub fn powder_spectrum(
    idx: FloquetIndex,
    params_template: &SpinParams,
    rotor: &RotorConfig,
    window: ModeTruncation,
    grid: &PowderGrid,
    n_samples: usize,
    dwell: f64,
    broadening_hz: f64,
) -> Result<Spectrum, CoreError> {
    let fid = powder_fid(idx, params_template, rotor, window, grid, n_samples, dwell)?;
    Ok(spectrum_of(&fid, broadening_hz))
}
