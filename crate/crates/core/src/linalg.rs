//! Small helpers over dense complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// max_{ij} |a_ij - b_ij|
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// max_{ij} |a_ij|
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// max_{ij} |m_ij - conj(m_ji)|
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// max_{ij} |(U U^dag - 1)_ij|
pub fn unitarity_defect(u: &CMat) -> f64 {
    let prod = u * u.adjoint();
    let id = CMat::identity(u.nrows(), u.ncols());
    max_abs_diff(&prod, &id)
}

/// Hermitian eigendecomposition: returns eigenvalues ascending with the
/// matching eigenvector columns.
pub fn eigh(m: &CMat) -> (DVector<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = DVector::from_iterator(n, order.iter().map(|&j| eig.eigenvalues[j]));
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// exp(-i H t) for Hermitian H, through the eigendecomposition.
pub fn expm_i_hermitian(h: &CMat, t: f64) -> CMat {
    let (vals, vecs) = eigh(h);
    let phases = CVec::from_iterator(vals.len(), vals.iter().map(|&l| (-I * l * t).exp()));
    &vecs * CMat::from_diagonal(&phases) * vecs.adjoint()
}

/// exp(-i H t) for an arbitrary (small) complex matrix via scaling and
/// squaring on the Taylor series. Used only by the stepped oracle where H
/// is 2x2 and Hermitian anyway; kept general for clarity.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = max_abs(m) * n as f64;
    let s = norm.log2().ceil().max(0.0) as u32;
    let scaled = m.map(|x| x / C64::new(2f64.powi(s as i32), 0.0));
    let mut term = CMat::identity(n, n);
    let mut acc = CMat::identity(n, n);
    for k in 1..24 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        acc += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}
