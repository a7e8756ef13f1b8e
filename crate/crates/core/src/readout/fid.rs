use num_complex::Complex64 as C64;

use crate::error::CoreError;
use crate::floquet::{FloquetDensity, FloquetIndex, ModeTruncation};
use crate::linalg::CMat;
use crate::shift::{
    cs_floquet_hamiltonian, effective_isotropic_shift, sideband_amplitudes, spin_rotation,
    PulsePhase, RotorConfig, SpinParams, DEFAULT_QUADRATURE_POINTS,
};

/// Detection channel of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    X,
    Y,
    /// Quadrature S_+ = S_x + i S_y.
    Quadrature,
}

pub const DEFAULT_FID_POINTS: usize = 4096;

/// One rotor period spans 64 dwell intervals, so every sideband lands on
/// an FFT bin for power-of-two trace lengths.
pub fn default_dwell(rotor: &RotorConfig) -> f64 {
    rotor.period() / 64.0
}

/// Uniformly sampled time-domain signal.
#[derive(Debug, Clone)]
pub struct FidTrace {
    pub dwell: f64,
    pub samples: Vec<C64>,
    pub detection: Detection,
}

impl FidTrace {
    pub fn new(dwell: f64, samples: Vec<C64>, detection: Detection) -> Self {
        assert!(dwell > 0.0);
        assert!(
            samples.len().is_power_of_two(),
            "trace length must be a power of two"
        );
        Self {
            dwell,
            samples,
            detection,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Single-channel trace derived from a quadrature trace.
    pub fn channel(&self, detection: Detection) -> FidTrace {
        assert_eq!(self.detection, Detection::Quadrature);
        let samples = self
            .samples
            .iter()
            .map(|s| match detection {
                Detection::X => C64::new(s.re, 0.0),
                Detection::Y => C64::new(s.im, 0.0),
                Detection::Quadrature => *s,
            })
            .collect();
        FidTrace::new(self.dwell, samples, detection)
    }

    /// CSV with columns time_s, re, im at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_s,re,im\n");
        for (j, s) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{:.12e},{:.12e},{:.12e}\n",
                j as f64 * self.dwell,
                s.re,
                s.im
            ));
        }
        out
    }
}

/// Closed-form readout trace of a dressed level |p m> after an ideal
/// 90-degree +x pulse, detected through the mode window |k| <= K:
///
///   S_+(t) = eps_p sum_k A_{-eps_p (k - m)} e^{i[-eps_p (k - m) w_r + d0'] t}
///
/// Sideband intensities A carry the whole anisotropy; the effective
/// isotropic shift d0' offsets every line identically for both spin
/// levels, and the two levels differ by the overall eps_p sign (180
/// degrees) and the edge of the retained index window.
pub fn analytic_fid(
    idx: FloquetIndex,
    params: &SpinParams,
    rotor: &RotorConfig,
    window: ModeTruncation,
    detection: Detection,
    n_samples: usize,
    dwell: f64,
) -> Result<FidTrace, CoreError> {
    if !window.contains(idx.n) {
        return Err(CoreError::ModeOutOfRange {
            m: idx.n,
            k: window.k,
        });
    }
    let eps = idx.epsilon() as f64;
    let span = (window.k + idx.n.abs()).min(DEFAULT_QUADRATURE_POINTS as i64 / 2 - 1);
    let set = sideband_amplitudes(params, rotor, span, DEFAULT_QUADRATURE_POINTS);
    let d0 = effective_isotropic_shift(params, rotor);

    let lines: Vec<(f64, f64)> = window
        .modes()
        .map(|k| {
            let a = set.a(-idx.epsilon() * (k - idx.n));
            let freq = -eps * (k - idx.n) as f64 * rotor.omega_r + d0;
            (a, freq)
        })
        .collect();

    let samples: Vec<C64> = (0..n_samples)
        .map(|j| {
            let t = j as f64 * dwell;
            let mut s = C64::new(0.0, 0.0);
            for &(a, freq) in &lines {
                s += C64::from_polar(a, freq * t);
            }
            s * eps
        })
        .collect();

    let quad = FidTrace::new(dwell, samples, Detection::Quadrature);
    Ok(match detection {
        Detection::Quadrature => quad,
        other => quad.channel(other),
    })
}

/// Window-restricted quadrature detection operator: -2i I_- on every
/// retained mode. Rotor-phase-averaged detection keeps only the
/// mode-diagonal part of the lowering operator; the -2i normalization
/// makes the trace of a bare level |p m> after an ideal 90-degree +x
/// pulse start at eps_p.
pub fn quadrature_detection(trunc: ModeTruncation) -> CMat {
    windowed_quadrature_detection(trunc, trunc)
}

/// Quadrature detection on a simulation space `trunc`, restricted to the
/// modes of a narrower detection `window` (a band-limited receiver).
pub fn windowed_quadrature_detection(trunc: ModeTruncation, window: ModeTruncation) -> CMat {
    assert!(window.k <= trunc.k);
    let dim = trunc.dim();
    let mut m = CMat::zeros(dim, dim);
    for n in trunc.modes() {
        if !window.contains(n) {
            continue;
        }
        let base = ((n + trunc.k) * 2) as usize;
        // I_- = |1><0| in spin space; scaled by -2i
        m[(base + 1, base)] = C64::new(0.0, -2.0);
    }
    m
}

/// Full density-matrix readout: ideal 90-degree +x pulse, free evolution
/// under the Floquet chemical-shift Hamiltonian, traced against the
/// window-restricted detection operator at every sample.
///
/// Evaluated in the eigenbasis, so the cost per sample is quadratic in
/// the Floquet dimension.
pub fn simulate_fid(
    sigma0: &FloquetDensity,
    params: &SpinParams,
    rotor: &RotorConfig,
    n_samples: usize,
    dwell: f64,
) -> Result<FidTrace, CoreError> {
    simulate_fid_windowed(sigma0, params, rotor, sigma0.truncation, n_samples, dwell)
}

/// `simulate_fid` with a detection window narrower than the simulation
/// space: the dynamics run on the full truncation of `sigma0`, the
/// receiver sees only sideband orders within `window`.
pub fn simulate_fid_windowed(
    sigma0: &FloquetDensity,
    params: &SpinParams,
    rotor: &RotorConfig,
    window: ModeTruncation,
    n_samples: usize,
    dwell: f64,
) -> Result<FidTrace, CoreError> {
    let trunc = sigma0.truncation;
    let dim = trunc.dim();

    // ideal (zero-width) pulse: pure spin rotation on every mode
    let u90 = spin_rotation(std::f64::consts::FRAC_PI_2, PulsePhase::PlusX);
    let mut u = CMat::zeros(dim, dim);
    for n in trunc.modes() {
        let base = ((n + trunc.k) * 2) as usize;
        for r in 0..2 {
            for c in 0..2 {
                u[(base + r, base + c)] = u90[(r, c)];
            }
        }
    }
    let sigma = &u * &sigma0.matrix * u.adjoint();

    let h = cs_floquet_hamiltonian(params, rotor, trunc)?;
    let eig = crate::floquet::diagonalize(&h);
    let v = &eig.eigenvectors;

    let obs = windowed_quadrature_detection(trunc, window);
    let a = v.adjoint() * &obs * v;
    let b = v.adjoint() * sigma * v;

    // S(t) = sum_{j,l} A_jl B_lj e^{i (lambda_j - lambda_l) t}
    let mut terms: Vec<(C64, f64)> = Vec::new();
    for j in 0..dim {
        for l in 0..dim {
            let c = a[(j, l)] * b[(l, j)];
            if c.norm() > 1e-16 {
                terms.push((c, eig.eigenvalues[j] - eig.eigenvalues[l]));
            }
        }
    }

    let samples: Vec<C64> = (0..n_samples)
        .map(|j| {
            let t = j as f64 * dwell;
            terms
                .iter()
                .map(|&(c, w)| c * C64::from_polar(1.0, w * t))
                .sum()
        })
        .collect();

    Ok(FidTrace::new(dwell, samples, Detection::Quadrature))
}
