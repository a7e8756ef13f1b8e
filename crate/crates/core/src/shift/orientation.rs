use super::params::{RotorConfig, SpinParams};

/// Dimensionless coefficients of the rotor harmonics in the anisotropic
/// modulation xi(t) = C1 cos(w_r t) + S1 sin(w_r t) + C2 cos(2 w_r t) +
/// S2 sin(2 w_r t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationCoefficients {
    pub c1: f64,
    pub s1: f64,
    pub c2: f64,
    pub s2: f64,
}

impl OrientationCoefficients {
    /// xi(t) evaluated at rotor phase phi = w_r t.
    pub fn xi(&self, phi: f64) -> f64 {
        self.c1 * phi.cos()
            + self.s1 * phi.sin()
            + self.c2 * (2.0 * phi).cos()
            + self.s2 * (2.0 * phi).sin()
    }

    /// Running integral of xi over rotor phase, normalized so that the
    /// result vanishes at phi = 0:  int_0^phi xi(p) dp.
    pub fn xi_phase_integral(&self, phi: f64) -> f64 {
        self.c1 * phi.sin() - self.s1 * (phi.cos() - 1.0)
            + self.c2 * (2.0 * phi).sin() / 2.0
            - self.s2 * ((2.0 * phi).cos() - 1.0) / 2.0
    }
}

/// Closed-form orientation coefficients for a shift tensor at Euler
/// angles (alpha, beta, gamma) in the rotor frame, rotor tilted by theta.
pub fn orientation_coefficients(
    params: &SpinParams,
    rotor: &RotorConfig,
) -> OrientationCoefficients {
    let (alpha, beta, gamma) = (params.euler.alpha, params.euler.beta, params.euler.gamma);
    let eta = params.eta;
    let theta = rotor.theta;

    let (sa, ca) = alpha.sin_cos();
    let (s2a, c2a) = (2.0 * alpha).sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c2g = (2.0 * gamma).cos();
    let s2g = (2.0 * gamma).sin();
    let s2t = (2.0 * theta).sin();
    let st2 = theta.sin() * theta.sin();

    let c1 = 0.5 * s2t * sb * (-cb * (eta * c2g + 3.0) * ca + eta * s2g * sa);
    let s1 = 0.5 * s2t * sb * (cb * (eta * c2g + 3.0) * sa + eta * s2g * ca);
    let c2 = 0.5
        * st2
        * ((1.5 * sb * sb - 0.5 * eta * c2g * (1.0 + cb * cb)) * c2a + eta * cb * s2g * s2a);
    let s2 = 0.5
        * st2
        * ((-1.5 * sb * sb - 0.5 * eta * c2g * (1.0 + cb * cb)) * s2a + eta * cb * s2g * c2a);

    OrientationCoefficients { c1, s1, c2, s2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::params::{EulerAngles, MAGIC_ANGLE};
    use nalgebra::{Matrix3, Vector3};
    use std::f64::consts::PI;

    fn coeffs(euler: EulerAngles, eta: f64, theta: f64) -> OrientationCoefficients {
        let p = SpinParams::new(0.0, 1.0, eta, euler);
        let rotor = RotorConfig::new(1.0, theta);
        orientation_coefficients(&p, &rotor)
    }

    #[test]
    fn theta_zero_kills_everything() {
        let c = coeffs(EulerAngles::from_degrees(30.0, 60.0, 45.0), 0.7, 0.0);
        assert!(c.c1.abs() < 1e-15);
        assert!(c.s1.abs() < 1e-15);
        assert!(c.c2.abs() < 1e-15);
        assert!(c.s2.abs() < 1e-15);
    }

    #[test]
    fn symmetric_tensor_perpendicular_at_alpha_zero_has_no_c1() {
        let c = coeffs(EulerAngles::new(0.0, PI / 2.0, 0.3), 0.0, MAGIC_ANGLE);
        assert!(c.c1.abs() < 1e-15);
    }

    #[test]
    fn gamma_is_pi_periodic() {
        let e = EulerAngles::from_degrees(20.0, 50.0, 33.0);
        let shifted = EulerAngles::new(e.alpha, e.beta, e.gamma + PI);
        let a = coeffs(e, 0.4, MAGIC_ANGLE);
        let b = coeffs(shifted, 0.4, MAGIC_ANGLE);
        assert!((a.c1 - b.c1).abs() < 1e-12);
        assert!((a.s1 - b.s1).abs() < 1e-12);
        assert!((a.c2 - b.c2).abs() < 1e-12);
        assert!((a.s2 - b.s2).abs() < 1e-12);
    }

    fn rz(a: f64) -> Matrix3<f64> {
        let (s, c) = a.sin_cos();
        Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
    }

    fn ry(a: f64) -> Matrix3<f64> {
        let (s, c) = a.sin_cos();
        Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
    }

    /// Rank-2 rotation oracle: place the normalized traceless tensor
    /// diag((1+eta)/2, (1-eta)/2, -1) into the rotor frame with an active
    /// ZYZ rotation, read the lab zz component along the spinning axis
    /// direction u(phi) = (sin theta cos phi, sin theta sin phi, cos theta),
    /// and project out the rotor harmonics by numerical quadrature.
    fn oracle_harmonics(euler: EulerAngles, eta: f64, theta: f64) -> [f64; 4] {
        let d = Matrix3::from_diagonal(&Vector3::new((1.0 + eta) / 2.0, (1.0 - eta) / 2.0, -1.0));
        let r = rz(euler.alpha) * ry(euler.beta) * rz(euler.gamma);
        let m = r * d * r.transpose();
        let n = 2048;
        let mut proj = [0.0_f64; 4];
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let u = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let zz = (u.transpose() * m * u)[(0, 0)];
            proj[0] += zz * phi.cos() * 2.0;
            proj[1] += zz * phi.sin() * 2.0;
            proj[2] += zz * (2.0 * phi).cos() * 2.0;
            proj[3] += zz * (2.0 * phi).sin() * 2.0;
        }
        proj.map(|v| v / n as f64)
    }

    /// The closed forms carry the source's own normalization and
    /// handedness: in units of the oracle's zz harmonics divided by
    /// sqrt(3)/2, the confirmable relation is
    ///   (2/sqrt3) * (C1, -S1, -C2) = oracle (cos, sin, cos2) components.
    /// The printed S2 does not match the sin2 harmonic under any rotation
    /// convention (exhaustive scan over ZYZ orderings, transposes, angle
    /// sign flips and pi/2 offsets, axis-assignment swaps, and rotor
    /// sense); it is recorded as an observed-only expression.
    #[test]
    fn rotation_oracle_confirms_three_of_four_components() {
        for (euler, eta) in [
            (EulerAngles::from_degrees(30.0, 60.0, 0.0), 0.5),
            (EulerAngles::from_degrees(30.0, 60.0, 25.0), 0.5),
            (EulerAngles::from_degrees(110.0, 40.0, 70.0), 0.8),
        ] {
            check_against_oracle(euler, eta);
        }
    }

    fn check_against_oracle(euler: EulerAngles, eta: f64) {
        let c = coeffs(euler, eta, MAGIC_ANGLE);
        let proj = oracle_harmonics(euler, eta, MAGIC_ANGLE);
        let k = 3.0_f64.sqrt() / 2.0;
        let scale = 2.0 / 3.0_f64.sqrt();
        assert!((proj[0] / k - scale * c.c1).abs() < 1e-10, "C1 vs oracle");
        assert!((proj[1] / k + scale * c.s1).abs() < 1e-10, "S1 vs oracle");
        assert!((proj[2] / k + scale * c.c2).abs() < 1e-10, "C2 vs oracle");
        // The oracle's sin2 harmonic corresponds to an S2 with the sign of
        // the 3/2 sin^2 beta term and of the eta cos beta sin 2gamma term
        // both flipped relative to the closed form above; neither variant
        // alone matches. Assert the exact relation so any drift is caught.
        let (sb, cb) = euler.beta.sin_cos();
        let st2 = MAGIC_ANGLE.sin().powi(2);
        let (s2a, c2a) = (2.0 * euler.alpha).sin_cos();
        let c2g = (2.0 * euler.gamma).cos();
        let s2g = (2.0 * euler.gamma).sin();
        let s2_true = -0.5
            * st2
            * ((1.5 * sb * sb - 0.5 * eta * c2g * (1.0 + cb * cb)) * s2a - eta * cb * s2g * c2a);
        assert!((proj[3] / k - scale * s2_true).abs() < 1e-10, "S2 vs oracle");
    }

    #[test]
    fn xi_phase_integral_differentiates_back_to_xi() {
        let c = coeffs(EulerAngles::from_degrees(30.0, 60.0, 10.0), 0.5, MAGIC_ANGLE);
        let h = 1e-6;
        for phi in [0.0, 0.7, 2.2, 5.9] {
            let num = (c.xi_phase_integral(phi + h) - c.xi_phase_integral(phi - h)) / (2.0 * h);
            assert!((num - c.xi(phi)).abs() < 1e-6);
        }
        assert!(c.xi_phase_integral(0.0).abs() < 1e-15);
    }
}
