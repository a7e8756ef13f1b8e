use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::params::RotorConfig;
use crate::error::CoreError;
use crate::floquet::{FloquetOperator, ModeTruncation};
use crate::linalg::CMat;

/// RF carrier phase of a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulsePhase {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
}

/// A rectangular RF pulse: field strength omega1 (rad/s), width t_p (s),
/// carrier phase. Flip angle = omega1 * t_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfPulse {
    pub omega1: f64,
    pub t_p: f64,
    pub phase: PulsePhase,
}

impl RfPulse {
    pub fn new(omega1: f64, t_p: f64, phase: PulsePhase) -> Self {
        assert!(omega1 >= 0.0 && t_p >= 0.0);
        let flip = omega1 * t_p;
        assert!(
            flip < 2.0 * std::f64::consts::PI,
            "flip angle must stay below a full turn"
        );
        Self { omega1, t_p, phase }
    }

    /// 90-degree pulse at the given field strength.
    pub fn ninety(omega1: f64, phase: PulsePhase) -> Self {
        Self::new(omega1, std::f64::consts::FRAC_PI_2 / omega1, phase)
    }

    pub fn flip_angle(&self) -> f64 {
        self.omega1 * self.t_p
    }
}

/// Spin-space rotation of a pulse: U = exp(+i angle G) with G the phase
/// generator (I_x for +x, and so on). The sign convention realizes
/// |0> -> (|0> + i|1>)/sqrt2 under a 90-degree +x pulse.
pub fn spin_rotation(angle: f64, phase: PulsePhase) -> Matrix2<C64> {
    let half = angle / 2.0;
    let (s, c) = half.sin_cos();
    let (cc, ss) = (C64::new(c, 0.0), C64::new(s, 0.0));
    let i = C64::new(0.0, 1.0);
    // exp(i theta I_u) = cos(theta/2) + i sin(theta/2) sigma_u
    match phase {
        PulsePhase::PlusX => Matrix2::new(cc, i * ss, i * ss, cc),
        PulsePhase::MinusX => Matrix2::new(cc, -i * ss, -i * ss, cc),
        PulsePhase::PlusY => Matrix2::new(cc, ss, -ss, cc),
        PulsePhase::MinusY => Matrix2::new(cc, -ss, ss, cc),
    }
}

/// Floquet-space propagator of an RF pulse, neglecting the chemical shift
/// during the pulse (strong-field limit).
///
/// exact = true: block-diagonal with blocks U_spin e^{-i n w_r t_p} -- the
/// mode ladder keeps running during the pulse. exact = false: the
/// simplified form that drops the mode phases, valid only while
/// K w_r t_p is small; rejected beyond 0.1.
pub fn rf_floquet_propagator(
    pulse: &RfPulse,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
    exact: bool,
) -> Result<FloquetOperator, CoreError> {
    let product = trunc.k as f64 * rotor.omega_r * pulse.t_p;
    if !exact && product > 0.1 {
        return Err(CoreError::RfApproximationInvalid {
            product,
            limit: 0.1,
        });
    }
    let u = spin_rotation(pulse.flip_angle(), pulse.phase);
    let dim = trunc.dim();
    let mut m = CMat::zeros(dim, dim);
    for n in trunc.modes() {
        let phase = if exact {
            C64::from_polar(1.0, -(n as f64) * rotor.omega_r * pulse.t_p)
        } else {
            C64::new(1.0, 0.0)
        };
        let base = ((n + trunc.k) * 2) as usize;
        for r in 0..2 {
            for c in 0..2 {
                m[(base + r, base + c)] = u[(r, c)] * phase;
            }
        }
    }
    Ok(FloquetOperator::new(m, trunc, rotor.omega_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn zero_width_pulse_is_the_identity() {
        let pulse = RfPulse::new(2.0 * PI * 50_000.0, 0.0, PulsePhase::PlusY);
        let rotor = RotorConfig::magic(2.0 * PI * 4000.0);
        let u = rf_floquet_propagator(&pulse, &rotor, ModeTruncation::new(2), true).unwrap();
        let dim = u.dim();
        assert!(crate::linalg::max_abs_diff(&u.matrix, &CMat::identity(dim, dim)) < 1e-14);
    }

    #[test]
    fn ninety_x_maps_ground_state_to_the_stated_superposition() {
        let u = spin_rotation(FRAC_PI_2, PulsePhase::PlusX);
        let amp = 1.0 / 2.0_f64.sqrt();
        // |0> -> (|0> + i|1>)/sqrt2
        assert!((u[(0, 0)] - C64::new(amp, 0.0)).norm() < 1e-15);
        assert!((u[(1, 0)] - C64::new(0.0, amp)).norm() < 1e-15);
    }

    #[test]
    fn opposite_phases_invert_each_other() {
        for (a, b) in [
            (PulsePhase::PlusX, PulsePhase::MinusX),
            (PulsePhase::PlusY, PulsePhase::MinusY),
        ] {
            let u = spin_rotation(0.77, a) * spin_rotation(0.77, b);
            assert!((u - Matrix2::identity()).iter().all(|x| x.norm() < 1e-14));
        }
    }

    #[test]
    fn ninety_pulse_flip_angle_is_exact() {
        let p = RfPulse::ninety(2.0 * PI * 83_000.0, PulsePhase::MinusX);
        assert!((p.flip_angle() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn simplified_form_tracks_the_exact_one_for_short_pulses() {
        let rotor = RotorConfig::magic(2.0 * PI * 4000.0);
        // 0.5 us keeps K*w_r*t_p (rad/s) under the 0.1 gate at K = 5
        let pulse = RfPulse::ninety(FRAC_PI_2 / 5e-7, PulsePhase::PlusX);
        let trunc = ModeTruncation::new(5);
        let bound = trunc.k as f64 * rotor.omega_r * pulse.t_p;
        assert!(bound <= 0.1);
        let exact = rf_floquet_propagator(&pulse, &rotor, trunc, true).unwrap();
        let approx = rf_floquet_propagator(&pulse, &rotor, trunc, false).unwrap();
        let diff = crate::linalg::max_abs_diff(&exact.matrix, &approx.matrix);
        assert!(diff <= bound, "diff {diff} exceeds bound {bound}");
        assert!(diff > 0.0);
    }

    #[test]
    fn simplified_form_is_rejected_for_long_pulses() {
        let rotor = RotorConfig::magic(2.0 * PI * 4000.0);
        let pulse = RfPulse::ninety(FRAC_PI_2 / 1e-4, PulsePhase::PlusX); // 100 us
        let err = rf_floquet_propagator(&pulse, &rotor, ModeTruncation::new(5), false);
        assert!(matches!(err, Err(CoreError::RfApproximationInvalid { .. })));
        // the exact form still works
        assert!(rf_floquet_propagator(&pulse, &rotor, ModeTruncation::new(5), true).is_ok());
    }

    #[test]
    fn exact_form_is_unitary() {
        let rotor = RotorConfig::magic(2.0 * PI * 4000.0);
        let pulse = RfPulse::new(2.0 * PI * 30_000.0, 4.3e-6, PulsePhase::MinusY);
        let u = rf_floquet_propagator(&pulse, &rotor, ModeTruncation::new(3), true).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
    }
}
