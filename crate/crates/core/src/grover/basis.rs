use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::gates::{embed_on_levels, restrict_to_levels};
use crate::error::CoreError;
use crate::floquet::{FloquetIndex, FloquetOperator, ModeTruncation};

/// The unitary that maps one prepared pseudo-pure state onto another:
/// U = P_to P_from^{-1}, where each P maps a common reference state to
/// its labeled state. Singular preparation operators are rejected.
pub fn state_transfer_unitary(
    p_from: &FloquetOperator,
    p_to: &FloquetOperator,
) -> Result<FloquetOperator, CoreError> {
    assert_eq!(p_from.dim(), p_to.dim());
    let inv = p_from
        .matrix
        .clone()
        .try_inverse()
        .ok_or(CoreError::SingularPreparation)?;
    // guard against numerically near-singular preparations that invert
    // formally but explode
    if inv.camax() > 1e9 {
        return Err(CoreError::SingularPreparation);
    }
    Ok(FloquetOperator::new(
        &p_to.matrix * inv,
        p_from.truncation,
        p_from.spinning_speed,
    ))
}

/// A preparation operator that moves population from a reference level
/// to a target level: a two-level swap, identity elsewhere.
pub fn preparation_operator(
    reference: FloquetIndex,
    target: FloquetIndex,
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> FloquetOperator {
    if reference == target {
        return FloquetOperator::identity(trunc, spinning_speed);
    }
    let small = DMatrix::from_fn(2, 2, |r, c| C64::new(if r != c { 1.0 } else { 0.0 }, 0.0));
    embed_on_levels(&small, &[reference, target], trunc, spinning_speed)
}

/// A complete unitary operator basis for an m x m computational subspace
/// drawn from a list of working Floquet levels. The counting rule
/// requires m + 1 levels: the first is the shared reference that anchors
/// preparation phases, the remaining m carry the computation. The basis
/// is the m^2 products X^a Z^b of the cyclic state-transfer operator X
/// and the clock phase operator Z on the computational levels -- both
/// are realizable as transfer and phase pulse sequences, and their
/// products are orthogonal under the trace inner product restricted to
/// the subspace.
pub fn peak_manipulation_basis(
    working_states: &[FloquetIndex],
    m: usize,
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> Result<Vec<FloquetOperator>, CoreError> {
    assert!(m >= 1);
    if working_states.len() < m + 1 {
        return Err(CoreError::InsufficientWorkingStates {
            needed: m + 1,
            m,
            got: working_states.len(),
        });
    }
    let comp = &working_states[1..=m];

    // cyclic shift X |j> = |j+1 mod m>
    let x = DMatrix::from_fn(m, m, |r, c| {
        C64::new(if r == (c + 1) % m { 1.0 } else { 0.0 }, 0.0)
    });
    // clock Z |j> = w^j |j>, w = e^{2 pi i / m}
    let z = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            C64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    let mut basis = Vec::with_capacity(m * m);
    let mut xa = DMatrix::identity(m, m);
    for _ in 0..m {
        let mut w = xa.clone();
        for _ in 0..m {
            basis.push(embed_on_levels(&w, comp, trunc, spinning_speed));
            w *= &z;
        }
        xa = &x * xa;
    }
    Ok(basis)
}

/// Expand a subspace unitary over an operator basis by the trace inner
/// product and report the expansion coefficients and the max-norm
/// reconstruction residual on the subspace.
pub fn expand_in_basis(
    target: &DMatrix<C64>,
    basis: &[FloquetOperator],
    comp_states: &[FloquetIndex],
) -> (Vec<C64>, f64) {
    let m = comp_states.len();
    assert_eq!(target.nrows(), m);
    let mut recon = DMatrix::zeros(m, m);
    let mut coeffs = Vec::with_capacity(basis.len());
    for b in basis {
        let bs = restrict_to_levels(b, comp_states);
        let c = (bs.adjoint() * target).trace() / C64::new(m as f64, 0.0);
        recon += &bs * c;
        coeffs.push(c);
    }
    let residual = (target - recon).camax();
    (coeffs, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_i_hermitian, unitarity_defect};
    use rand::{Rng, SeedableRng};

    fn working5() -> Vec<FloquetIndex> {
        vec![
            FloquetIndex::new(0, -1),
            FloquetIndex::new(0, 0),
            FloquetIndex::new(1, 0),
            FloquetIndex::new(0, 1),
            FloquetIndex::new(1, 1),
        ]
    }

    fn trunc() -> ModeTruncation {
        ModeTruncation::new(1)
    }

    #[test]
    fn transfer_between_identical_preparations_is_the_identity() {
        let p = preparation_operator(
            FloquetIndex::new(0, -1),
            FloquetIndex::new(1, 0),
            trunc(),
            1.0,
        );
        let u = state_transfer_unitary(&p, &p).unwrap();
        let id = FloquetOperator::identity(trunc(), 1.0);
        assert!(crate::linalg::max_abs_diff(&u.matrix, &id.matrix) < 1e-12);
    }

    #[test]
    fn transfer_conjugates_one_pure_level_into_another() {
        let reference = FloquetIndex::new(0, -1);
        let from = FloquetIndex::new(0, 0);
        let to = FloquetIndex::new(1, 0);
        let pf = preparation_operator(reference, from, trunc(), 1.0);
        let pt = preparation_operator(reference, to, trunc(), 1.0);
        let u = state_transfer_unitary(&pf, &pt).unwrap();
        assert!(unitarity_defect(&u.matrix) < 1e-12);

        let i_from = from.flatten(trunc());
        let i_to = to.flatten(trunc());
        let dim = trunc().dim();
        let mut rho = crate::linalg::CMat::zeros(dim, dim);
        rho[(i_from, i_from)] = C64::new(1.0, 0.0);
        let out = &u.matrix * rho * u.matrix.adjoint();
        assert!((out[(i_to, i_to)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transfers_compose_along_a_chain() {
        let w = working5();
        let p: Vec<FloquetOperator> = w
            .iter()
            .map(|&s| preparation_operator(w[0], s, trunc(), 1.0))
            .collect();
        let u12 = state_transfer_unitary(&p[1], &p[2]).unwrap();
        let u23 = state_transfer_unitary(&p[2], &p[3]).unwrap();
        let u13 = state_transfer_unitary(&p[1], &p[3]).unwrap();
        let composed = &u23.matrix * &u12.matrix;
        assert!(crate::linalg::max_abs_diff(&composed, &u13.matrix) < 1e-9);
    }

    #[test]
    fn singular_preparation_is_rejected() {
        let mut p = FloquetOperator::identity(trunc(), 1.0);
        let dim = p.dim();
        p.matrix[(0, 0)] = C64::new(0.0, 0.0);
        // make an exactly rank-deficient matrix
        for j in 1..dim {
            p.matrix[(0, j)] = C64::new(0.0, 0.0);
        }
        let q = FloquetOperator::identity(trunc(), 1.0);
        let err = state_transfer_unitary(&p, &q);
        assert!(matches!(err, Err(CoreError::SingularPreparation)));
    }

    #[test]
    fn two_by_two_basis_has_four_orthogonal_elements() {
        let w = working5();
        let basis = peak_manipulation_basis(&w[..3], 2, trunc(), 1.0).unwrap();
        assert_eq!(basis.len(), 4);
        let comp = &w[1..3];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let asb = restrict_to_levels(a, comp);
                let bsb = restrict_to_levels(b, comp);
                let ip = (asb.adjoint() * bsb).trace();
                let want = if i == j { C64::new(2.0, 0.0) } else { C64::new(0.0, 0.0) };
                assert!((ip - want).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn too_few_working_states_are_rejected_with_the_counting_rule() {
        let w = working5();
        let err = peak_manipulation_basis(&w[..1], 2, trunc(), 1.0);
        match err {
            Err(CoreError::InsufficientWorkingStates { needed, m, got }) => {
                assert_eq!(needed, 3);
                assert_eq!(m, 2);
                assert_eq!(got, 1);
            }
            other => panic!("expected counting-rule rejection, got {other:?}"),
        }
    }

    #[test]
    fn four_by_four_basis_expands_random_unitaries() {
        let w = working5();
        let basis = peak_manipulation_basis(&w, 4, trunc(), 1.0).unwrap();
        assert_eq!(basis.len(), 16);
        for b in &basis {
            assert!(unitarity_defect(&b.matrix) < 1e-12);
        }
        let comp = &w[1..5];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let mut h = crate::linalg::CMat::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    h[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
            let u = expm_i_hermitian(&h, 1.0);
            let (_, residual) = expand_in_basis(&u, &basis, comp);
            assert!(residual <= 1e-8, "residual {residual}");
        }
    }
}
