use num_complex::Complex64 as C64;

use super::fid::{analytic_fid, Detection};
use super::powder::{powder_spectrum, PowderGrid};
use super::spectrum::{spectrum_of, Spectrum};
use crate::error::CoreError;
use crate::floquet::{FloquetIndex, ModeTruncation};
use crate::shift::{RotorConfig, SpinParams};

/// Reference spectra of every dressed level (p, m) with |m| <= m_max,
/// used to read a state label back out of a measured spectrum.
#[derive(Debug, Clone)]
pub struct ReferenceLibrary {
    pub entries: Vec<(FloquetIndex, Vec<C64>)>,
}

/// Identification outcome: the matched level, its correlation score, and
/// the margin to the runner-up.
#[derive(Debug, Clone, Copy)]
pub struct Identification {
    pub index: FloquetIndex,
    pub score: f64,
    pub margin: f64,
}

impl ReferenceLibrary {
    pub fn from_spectra(entries: Vec<(FloquetIndex, Spectrum)>) -> Self {
        assert!(!entries.is_empty());
        let len = entries[0].1.len();
        assert!(entries.iter().all(|(_, s)| s.len() == len));
        Self {
            entries: entries
                .into_iter()
                .map(|(idx, s)| (idx, s.amplitudes()))
                .collect(),
        }
    }

    /// Single-crystal analytic library over all levels with |m| <= m_max.
    pub fn single_crystal(
        params: &SpinParams,
        rotor: &RotorConfig,
        window: ModeTruncation,
        m_max: i64,
        n_samples: usize,
        dwell: f64,
        broadening_hz: f64,
    ) -> Result<Self, CoreError> {
        let mut entries = Vec::new();
        for p in 0..2u8 {
            for m in -m_max..=m_max {
                let idx = FloquetIndex::new(p, m);
                let fid = analytic_fid(
                    idx,
                    params,
                    rotor,
                    window,
                    Detection::Quadrature,
                    n_samples,
                    dwell,
                )?;
                entries.push((idx, spectrum_of(&fid, broadening_hz)));
            }
        }
        Ok(Self::from_spectra(entries))
    }

    /// Powder-averaged analytic library over all levels with |m| <= m_max.
    #[allow(clippy::too_many_arguments)]
    pub fn powder(
        params_template: &SpinParams,
        rotor: &RotorConfig,
        window: ModeTruncation,
        m_max: i64,
        grid: &PowderGrid,
        n_samples: usize,
        dwell: f64,
        broadening_hz: f64,
    ) -> Result<Self, CoreError> {
        let mut entries = Vec::new();
        for p in 0..2u8 {
            for m in -m_max..=m_max {
                let idx = FloquetIndex::new(p, m);
                let spec = powder_spectrum(
                    idx,
                    params_template,
                    rotor,
                    window,
                    grid,
                    n_samples,
                    dwell,
                    broadening_hz,
                )?;
                entries.push((idx, spec));
            }
        }
        Ok(Self::from_spectra(entries))
    }
}

/// Match a spectrum against the library by normalized cross-correlation
/// Re<s, r> / (|s| |r|) — phase-sensitive, so the 180-degree inversion
/// between the two spin levels is distinguishing information. Margins
/// below 0.1 between the best and second-best score are rejected as
/// ambiguous.
pub fn identify_state(
    spec: &Spectrum,
    library: &ReferenceLibrary,
) -> Result<Identification, CoreError> {
    let s = spec.amplitudes();
    let sn = s.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut scored: Vec<(FloquetIndex, f64)> = library
        .entries
        .iter()
        .map(|(idx, r)| {
            assert_eq!(r.len(), s.len(), "bin grids must match");
            let rn = r.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let dot: C64 = s.iter().zip(r).map(|(a, b)| a * b.conj()).sum();
            (*idx, dot.re / (sn * rn))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (best_idx, best) = scored[0];
    let margin = if scored.len() > 1 {
        best - scored[1].1
    } else {
        best
    };
    if margin < 0.1 {
        return Err(CoreError::AmbiguousReadout { margin });
    }
    Ok(Identification {
        index: best_idx,
        score: best,
        margin,
    })
}
