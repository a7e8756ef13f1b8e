use num_complex::Complex64 as C64;

use crate::error::CoreError;
use crate::floquet::{FloquetDensity, FloquetIndex, ModeTruncation};
use crate::linalg::CMat;

/// Recipe for a pseudo-pure density on the truncated Floquet space:
/// (1 - alpha) I/D + alpha |pm><pm| with D the actual matrix dimension.
#[derive(Debug, Clone, Copy)]
pub struct PseudoPureSpec {
    pub target: FloquetIndex,
    pub alpha: f64,
    pub truncation: ModeTruncation,
}

/// Build the pseudo-pure density for a spec. The identity part is
/// normalized by the true Floquet dimension 2(2K+1), so the trace is
/// exactly 1 for any purity.
pub fn make_pseudo_pure(spec: &PseudoPureSpec) -> Result<FloquetDensity, CoreError> {
    if spec.alpha.abs() > 1.0 {
        return Err(CoreError::PurityOutOfRange { alpha: spec.alpha });
    }
    let trunc = spec.truncation;
    if !trunc.contains(spec.target.n) {
        return Err(CoreError::ModeOutOfRange {
            m: spec.target.n,
            k: trunc.k,
        });
    }
    let dim = trunc.dim();
    let mut m = CMat::identity(dim, dim) * C64::new((1.0 - spec.alpha) / dim as f64, 0.0);
    let i = spec.target.flatten(trunc);
    m[(i, i)] += C64::new(spec.alpha, 0.0);
    Ok(FloquetDensity::new(
        m,
        spec.alpha,
        Some(spec.target),
        trunc,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, expm_i_hermitian, max_abs_diff};
    use rand::{Rng, SeedableRng};

    fn random_hermitian(rng: &mut impl Rng, dim: usize) -> CMat {
        let mut g = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        (&g + g.adjoint()) * C64::new(0.5, 0.0)
    }

    #[test]
    fn zero_purity_is_maximally_mixed() {
        let trunc = ModeTruncation::new(2);
        let rho = make_pseudo_pure(&PseudoPureSpec {
            target: FloquetIndex::new(0, 0),
            alpha: 0.0,
            truncation: trunc,
        })
        .unwrap();
        let mixed = FloquetDensity::maximally_mixed(trunc);
        assert!(max_abs_diff(&rho.matrix, &mixed.matrix) < 1e-15);
    }

    #[test]
    fn unit_purity_is_the_projector() {
        let trunc = ModeTruncation::new(2);
        let idx = FloquetIndex::new(0, 0);
        let rho = make_pseudo_pure(&PseudoPureSpec {
            target: idx,
            alpha: 1.0,
            truncation: trunc,
        })
        .unwrap();
        let pure = FloquetDensity::pure_state(idx, trunc);
        assert!(max_abs_diff(&rho.matrix, &pure.matrix) < 1e-15);
    }

    #[test]
    fn purity_out_of_range_rejected() {
        let err = make_pseudo_pure(&PseudoPureSpec {
            target: FloquetIndex::new(1, 0),
            alpha: 1.2,
            truncation: ModeTruncation::new(1),
        });
        assert!(matches!(err, Err(CoreError::PurityOutOfRange { .. })));
    }

    /// The three ensemble-pure-state criteria, restated as testable
    /// facts: unit trace, unitary conjugation acts on the pure part only,
    /// and traceless observables see alpha times the pure expectation.
    #[test]
    fn ensemble_purity_criteria_hold_for_random_unitaries_and_observables() {
        let trunc = ModeTruncation::new(1);
        let dim = trunc.dim();
        let idx = FloquetIndex::new(1, -1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let alpha = rng.gen_range(-1.0..1.0);
            let rho = make_pseudo_pure(&PseudoPureSpec {
                target: idx,
                alpha,
                truncation: trunc,
            })
            .unwrap();

            // (a) unit trace
            assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);

            // (b) conjugation touches only the pure part
            let u = expm_i_hermitian(&random_hermitian(&mut rng, dim), 1.0);
            let evolved = &u * &rho.matrix * u.adjoint();
            let i = idx.flatten(trunc);
            let mut pure = CMat::zeros(dim, dim);
            pure[(i, i)] = C64::new(1.0, 0.0);
            let expected = CMat::identity(dim, dim) * C64::new((1.0 - alpha) / dim as f64, 0.0)
                + &u * pure * u.adjoint() * C64::new(alpha, 0.0);
            assert!(max_abs_diff(&evolved, &expected) < 1e-12);

            // (c) traceless observables scale by alpha
            let mut d = random_hermitian(&mut rng, dim);
            let tr = d.trace() / C64::new(dim as f64, 0.0);
            for j in 0..dim {
                d[(j, j)] -= tr;
            }
            let measured = (&d * &rho.matrix).trace();
            let pure_expect = d[(i, i)];
            assert!((measured - pure_expect * C64::new(alpha, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn negative_purity_keeps_unit_trace_and_hermiticity() {
        let rho = make_pseudo_pure(&PseudoPureSpec {
            target: FloquetIndex::new(0, 1),
            alpha: -0.7,
            truncation: ModeTruncation::new(1),
        })
        .unwrap();
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(rho.hermiticity_defect() < 1e-15);
        let (vals, _) = eigh(&rho.matrix);
        // the target level is depleted below the uniform background
        assert!(vals[0] < 1.0 / rho.dim() as f64);
    }
}
