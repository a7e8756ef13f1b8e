use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use crate::linalg::expm;
use crate::linalg::CMat;

/// Ground-truth propagator by brute-force time stepping: the interval
/// [0, t] is split into `n_steps` pieces and the evolution is the
/// time-ordered product of piecewise-constant exponentials.
///
/// Within each step the Hamiltonian is sampled at the two-point Gauss
/// nodes and averaged, so the per-step phase integral of a commuting
/// family is quadrature-accurate; for non-commuting Hamiltonians the
/// time-ordering error remains O(dt).
pub fn stepped_propagator_oracle<F>(h_of_t: F, t: f64, n_steps: usize) -> Matrix2<C64>
where
    F: Fn(f64) -> Matrix2<C64>,
{
    assert!(n_steps >= 1);
    let dt = t / n_steps as f64;
    // Gauss-Legendre nodes on [0, 1]
    let a = 0.5 - 0.5 / 3.0_f64.sqrt();
    let b = 0.5 + 0.5 / 3.0_f64.sqrt();
    let mut u = Matrix2::identity();
    for i in 0..n_steps {
        let t0 = i as f64 * dt;
        let h = (h_of_t(t0 + a * dt) + h_of_t(t0 + b * dt)) * C64::new(0.5, 0.0);
        let step = expm_2x2(&h, dt);
        u = step * u; // later times act from the left
    }
    u
}

fn expm_2x2(h: &Matrix2<C64>, dt: f64) -> Matrix2<C64> {
    let m = CMat::from_fn(2, 2, |i, j| h[(i, j)] * C64::new(0.0, -dt));
    let e = expm(&m);
    Matrix2::new(e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)])
}
