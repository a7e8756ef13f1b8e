use std::f64::consts::PI;

/// Rotor axis tilt with cos^2(theta_m) = 1/3, where the rank-2 Legendre
/// factor P2(cos theta) vanishes.
pub const MAGIC_ANGLE: f64 = 0.955_316_618_124_509_3;

/// ZYZ Euler angles (radians) carrying the shift tensor principal axis
/// system into the rotor frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.to_radians(), beta.to_radians(), gamma.to_radians())
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

/// Chemical-shift tensor of a single spin-1/2, in angular frequency units
/// (rad/s): isotropic part `delta0`, anisotropy `delta` = sigma_iso -
/// sigma_33 >= 0, asymmetry `eta` in [0, 1], and the orientation of the
/// principal axes in the rotor frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    pub delta0: f64,
    pub delta: f64,
    pub eta: f64,
    pub euler: EulerAngles,
}

impl SpinParams {
    pub fn new(delta0: f64, delta: f64, eta: f64, euler: EulerAngles) -> Self {
        assert!(delta >= 0.0, "anisotropy must be non-negative");
        assert!((0.0..=1.0).contains(&eta), "asymmetry must be in [0, 1]");
        Self {
            delta0,
            delta,
            eta,
            euler,
        }
    }

    /// Purely isotropic tensor.
    pub fn isotropic(delta0: f64) -> Self {
        Self::new(delta0, 0.0, 0.0, EulerAngles::zero())
    }

    /// Principal values (sigma_11 >= sigma_22 >= sigma_33), same frequency
    /// units as `delta0`.
    pub fn principal_values(&self) -> [f64; 3] {
        [
            self.delta0 + self.delta * (1.0 + self.eta) / 2.0,
            self.delta0 + self.delta * (1.0 - self.eta) / 2.0,
            self.delta0 - self.delta,
        ]
    }

    /// Build from ordered principal values.
    pub fn from_principal_values(sigma: [f64; 3], euler: EulerAngles) -> Self {
        let [s11, s22, s33] = sigma;
        assert!(
            s11 >= s22 && s22 >= s33,
            "principal values must be ordered descending"
        );
        let delta0 = (s11 + s22 + s33) / 3.0;
        let delta = delta0 - s33;
        let eta = if delta == 0.0 { 0.0 } else { (s11 - s22) / delta };
        // clamp roundoff just outside [0, 1]
        Self::new(delta0, delta, eta.clamp(0.0, 1.0), euler)
    }
}

/// Sample spinning about an axis tilted by `theta` from the static field,
/// at angular rate `omega_r` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorConfig {
    pub omega_r: f64,
    pub theta: f64,
}

impl RotorConfig {
    pub fn new(omega_r: f64, theta: f64) -> Self {
        assert!(omega_r > 0.0, "spinning rate must be positive");
        Self { omega_r, theta }
    }

    /// Spinning at the magic angle.
    pub fn magic(omega_r: f64) -> Self {
        Self::new(omega_r, MAGIC_ANGLE)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_r
    }
}

/// Second Legendre polynomial (3x^2 - 1)/2.
pub fn p2(x: f64) -> f64 {
    (3.0 * x * x - 1.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn magic_angle_kills_the_legendre_factor() {
        assert!(p2(MAGIC_ANGLE.cos()).abs() < 1e-15);
        assert_relative_eq!(MAGIC_ANGLE, (1.0 / 3.0_f64.sqrt()).acos(), epsilon = 1e-15);
    }

    #[test]
    fn principal_values_round_trip() {
        let p = SpinParams::new(
            2.0 * PI * 1000.0,
            2.0 * PI * 20_000.0,
            0.5,
            EulerAngles::from_degrees(30.0, 60.0, 0.0),
        );
        let sigma = p.principal_values();
        let q = SpinParams::from_principal_values(sigma, p.euler);
        assert_relative_eq!(p.delta0, q.delta0, epsilon = 1e-9);
        assert_relative_eq!(p.delta, q.delta, epsilon = 1e-9);
        assert_relative_eq!(p.eta, q.eta, epsilon = 1e-12);
    }

    #[test]
    fn principal_values_are_ordered() {
        let p = SpinParams::new(0.0, 1.0, 0.7, EulerAngles::zero());
        let [a, b, c] = p.principal_values();
        assert!(a >= b && b >= c);
        // traceless when delta0 = 0
        assert!((a + b + c).abs() < 1e-15);
    }
}
