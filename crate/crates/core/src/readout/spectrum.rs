use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::fid::FidTrace;

/// Frequency-domain representation: bins sorted by ascending frequency.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// (frequency in Hz, complex amplitude)
    pub bins: Vec<(f64, C64)>,
    /// Lorentzian full width at half maximum in Hz; 0 = stick spectrum.
    pub broadening: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.bins.iter().map(|&(_, a)| a).collect()
    }

    /// Amplitude at the bin nearest to the requested frequency.
    pub fn amplitude_at(&self, f_hz: f64) -> C64 {
        let df = self.bins[1].0 - self.bins[0].0;
        let j = ((f_hz - self.bins[0].0) / df).round();
        assert!(j >= 0.0 && (j as usize) < self.bins.len(), "frequency off grid");
        self.bins[j as usize].1
    }

    pub fn max_abs(&self) -> f64 {
        self.bins.iter().map(|&(_, a)| a.norm()).fold(0.0, f64::max)
    }

    /// CSV with columns frequency_hz, re, im at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency_hz,re,im\n");
        for &(f, a) in &self.bins {
            out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", f, a.re, a.im));
        }
        out
    }
}

/// Discrete Fourier transform of a trace, normalized so a unit complex
/// exponential on a bin frequency gives unit amplitude. A positive
/// broadening applies Lorentzian line shape of that full width at half
/// maximum via the equivalent time-domain weighting exp(-pi lb t).
pub fn spectrum_of(fid: &FidTrace, broadening_hz: f64) -> Spectrum {
    assert!(broadening_hz >= 0.0);
    let n = fid.len();
    let mut buf: Vec<rustfft::num_complex::Complex<f64>> = fid
        .samples
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let w = if broadening_hz > 0.0 {
                (-std::f64::consts::PI * broadening_hz * j as f64 * fid.dwell).exp()
            } else {
                1.0
            };
            rustfft::num_complex::Complex::new(s.re * w, s.im * w)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    // signal convention e^{+i w t}: forward-FFT bin k holds frequency
    // k/(n dwell), aliased into [-1/(2 dwell), 1/(2 dwell))
    let df = 1.0 / (n as f64 * fid.dwell);
    let mut bins: Vec<(f64, C64)> = (0..n)
        .map(|k| {
            let f = if k < n / 2 {
                k as f64 * df
            } else {
                (k as f64 - n as f64) * df
            };
            (f, C64::new(buf[k].re, buf[k].im) / n as f64)
        })
        .collect();
    bins.sort_by(|a, b| a.0.total_cmp(&b.0));
    Spectrum {
        bins,
        broadening: broadening_hz,
    }
}

/// Zero-order phase correction that minimizes the imaginary content:
/// returns the phased spectrum, the applied phase, and the relative
/// imaginary residue sqrt(sum Im^2 / sum |a|^2) after phasing.
pub fn phase_absorptive(spec: &Spectrum) -> (Spectrum, f64, f64) {
    // minimize sum Im(a e^{-i phi})^2: quadratic in e^{2i phi}, solved by
    // the second moment; disambiguate with the residue and overall sign
    let m2: C64 = spec.bins.iter().map(|&(_, a)| a * a).sum();
    let base = 0.5 * m2.arg();
    let mut best = (f64::INFINITY, 0.0);
    for cand in [base, base + std::f64::consts::FRAC_PI_2] {
        for s in [0.0, std::f64::consts::PI] {
            let phi = cand + s;
            let rot = C64::from_polar(1.0, -phi);
            let im2: f64 = spec.bins.iter().map(|&(_, a)| (a * rot).im.powi(2)).sum();
            let re: f64 = spec.bins.iter().map(|&(_, a)| (a * rot).re).sum();
            // prefer positive net absorption at equal residue
            let key = im2 - 1e-12 * re.signum();
            if key < best.0 {
                best = (key, phi);
            }
        }
    }
    let phi = best.1;
    let rot = C64::from_polar(1.0, -phi);
    let bins: Vec<(f64, C64)> = spec.bins.iter().map(|&(f, a)| (f, a * rot)).collect();
    let total: f64 = bins.iter().map(|&(_, a)| a.norm_sqr()).sum();
    let im2: f64 = bins.iter().map(|&(_, a)| a.im.powi(2)).sum();
    let residue = if total > 0.0 { (im2 / total).sqrt() } else { 0.0 };
    (
        Spectrum {
            bins,
            broadening: spec.broadening,
        },
        phi,
        residue,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{FloquetIndex, ModeTruncation};
    use crate::readout::fid::{analytic_fid, default_dwell, Detection};
    use crate::shift::{EulerAngles, RotorConfig, SpinParams};
    use std::f64::consts::PI;

    fn fig_params() -> (SpinParams, RotorConfig) {
        (
            SpinParams::new(
                0.0,
                2.0 * PI * 20_000.0,
                0.5,
                EulerAngles::from_degrees(30.0, 60.0, 0.0),
            ),
            RotorConfig::magic(2.0 * PI * 4000.0),
        )
    }

    #[test]
    fn single_exponential_lands_on_a_single_bin() {
        let dwell = 1.0 / 1024.0;
        let f0 = 96.0; // on-grid for 256 points
        let samples: Vec<C64> = (0..256)
            .map(|j| C64::from_polar(0.7, 2.0 * PI * f0 * j as f64 * dwell))
            .collect();
        let spec = spectrum_of(&FidTrace::new(dwell, samples, Detection::Quadrature), 0.0);
        for &(f, a) in &spec.bins {
            if (f - f0).abs() < 1e-9 {
                assert!((a - C64::new(0.7, 0.0)).norm() < 1e-10);
            } else {
                assert!(a.norm() < 1e-10, "leakage at {f}");
            }
        }
    }

    #[test]
    fn stick_support_matches_the_sideband_index_set() {
        let (p, rotor) = fig_params();
        let window = ModeTruncation::new(12);
        let dwell = default_dwell(&rotor);
        for (pp, m) in [(0u8, 0i64), (1, 0), (0, 1), (1, -1)] {
            let idx = FloquetIndex::new(pp, m);
            let fid =
                analytic_fid(idx, &p, &rotor, window, Detection::Quadrature, 4096, dwell).unwrap();
            let spec = spectrum_of(&fid, 0.0);
            let eps = idx.epsilon();
            let allowed: Vec<f64> = window
                .modes()
                .map(|k| (-eps * (k - m)) as f64 * rotor.omega_r / (2.0 * PI))
                .collect();
            for &(f, a) in &spec.bins {
                let on_line = allowed.iter().any(|&g| (f - g).abs() < 1e-6);
                if !on_line {
                    assert!(a.norm() < 1e-10, "({pp},{m}): stray amplitude at {f} Hz");
                }
            }
        }
    }

    #[test]
    fn spin_level_sign_flip_inverts_the_spectrum() {
        // same line positions, opposite spin level: the spectra differ by
        // an overall sign (180-degree phase), exact at m = 0 where the
        // retained index windows coincide
        let (mut p, rotor) = fig_params();
        p.delta0 = 2.0 * PI * 250.0;
        let window = ModeTruncation::new(12);
        let dwell = default_dwell(&rotor);
        let s0 = spectrum_of(
            &analytic_fid(
                FloquetIndex::new(0, 0),
                &p,
                &rotor,
                window,
                Detection::Quadrature,
                4096,
                dwell,
            )
            .unwrap(),
            0.0,
        );
        let s1 = spectrum_of(
            &analytic_fid(
                FloquetIndex::new(1, 0),
                &p,
                &rotor,
                window,
                Detection::Quadrature,
                4096,
                dwell,
            )
            .unwrap(),
            0.0,
        );
        for (&(f, a), &(g, b)) in s0.bins.iter().zip(&s1.bins) {
            assert!((f - g).abs() < 1e-9);
            assert!((a + b).norm() < 1e-10, "at {f} Hz: {a} vs {b}");
        }
    }

    #[test]
    fn broadening_spreads_a_stick_symmetrically() {
        let rotor = RotorConfig::magic(2.0 * PI * 4000.0);
        let dwell = default_dwell(&rotor);
        let samples: Vec<C64> = (0..4096).map(|_| C64::new(1.0, 0.0)).collect();
        let spec = spectrum_of(&FidTrace::new(dwell, samples, Detection::Quadrature), 20.0);
        let center = spec.amplitude_at(0.0);
        assert!(center.re > 0.1 && center.re < 1.0);
        let df = 1.0 / (4096.0 * dwell);
        let side = spec.amplitude_at(3.0 * df);
        assert!(side.norm() > 1e-4 && side.norm() < center.norm());
    }

    #[test]
    fn phasing_a_rotated_real_spectrum_recovers_it() {
        let dwell = 1.0 / 1024.0;
        let samples: Vec<C64> = (0..256)
            .map(|j| {
                let t = j as f64 * dwell;
                (C64::from_polar(0.4, 2.0 * PI * 32.0 * t)
                    + C64::from_polar(0.8, 2.0 * PI * 64.0 * t))
                    * C64::from_polar(1.0, 1.1)
            })
            .collect();
        let spec = spectrum_of(&FidTrace::new(dwell, samples, Detection::Quadrature), 0.0);
        let (phased, phi, residue) = phase_absorptive(&spec);
        assert!(residue < 1e-10, "residue {residue}");
        assert!((phi - 1.1).abs() < 1e-8, "phase {phi}");
        assert!(phased.amplitude_at(32.0).re > 0.39);
    }

    #[test]
    fn csv_round_trips_to_twelve_digits() {
        let dwell = 1.0 / 500.0;
        let samples = vec![C64::new(0.123456789012345, -1.0); 2];
        let fid = FidTrace::new(dwell, samples, Detection::Quadrature);
        let csv = fid.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "time_s,re,im");
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert!((row[1] - 0.123456789012345).abs() < 1e-12);
    }
}
