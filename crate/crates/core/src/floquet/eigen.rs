use num_complex::Complex64 as C64;

use super::operator::FloquetOperator;
use crate::error::CoreError;
use crate::linalg::{eigh, CMat, CVec, I};

/// Eigensystem of a Floquet Hamiltonian.
///
/// Eigenvalues are sorted ascending. The reduced eigenvalues q_r are
/// obtained by folding each eigenvalue into the first Brillouin zone
/// (-omega_r/2, omega_r/2] and recording the mode offset n that was
/// removed: lambda = q + n*omega_r.
#[derive(Debug, Clone)]
pub struct FloquetEigensystem {
    pub eigenvalues: Vec<f64>,
    /// Columns are the Floquet eigenstates.
    pub eigenvectors: CMat,
    pub reduced: Vec<f64>,
    pub mode_offsets: Vec<i64>,
    /// Set when two eigenvalues were closer than 1e-10 * omega_r and the
    /// deterministic lexicographic tie-break was applied.
    pub degenerate: bool,
    pub spinning_speed: f64,
    pub truncation: super::ModeTruncation,
}

fn fold(lambda: f64, omega_r: f64) -> (f64, i64) {
    let mut n = (lambda / omega_r).round() as i64;
    let mut q = lambda - n as f64 * omega_r;
    // boundary convention: q in (-omega_r/2, omega_r/2]
    while q <= -omega_r / 2.0 {
        n -= 1;
        q = lambda - n as f64 * omega_r;
    }
    while q > omega_r / 2.0 {
        n += 1;
        q = lambda - n as f64 * omega_r;
    }
    (q, n)
}

/// Lexicographic order on eigenvector columns, used only to break exact
/// degeneracies deterministically.
fn column_cmp(m: &CMat, a: usize, b: usize) -> std::cmp::Ordering {
    for i in 0..m.nrows() {
        let x = m[(i, a)];
        let y = m[(i, b)];
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

pub fn diagonalize(h: &FloquetOperator) -> FloquetEigensystem {
    let omega_r = h.spinning_speed;
    let (vals, mut vecs) = eigh(&h.matrix);
    let n = vals.len();

    // fix each column's global phase: largest-magnitude entry real positive
    for c in 0..n {
        let mut best = 0;
        let mut best_norm = 0.0;
        for r in 0..n {
            let nn = vecs[(r, c)].norm();
            if nn > best_norm + 1e-14 {
                best_norm = nn;
                best = r;
            }
        }
        if best_norm > 0.0 {
            let phase = vecs[(best, c)] / C64::new(best_norm, 0.0);
            let corr = phase.conj();
            for r in 0..n {
                vecs[(r, c)] *= corr;
            }
        }
    }

    // deterministic tie-break inside degenerate clusters
    let tol = 1e-10 * omega_r.abs().max(1.0);
    let mut degenerate = false;
    let mut order: Vec<usize> = (0..n).collect();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (vals[j] - vals[j - 1]).abs() <= tol {
            j += 1;
        }
        if j - i > 1 {
            degenerate = true;
            order[i..j].sort_by(|&a, &b| column_cmp(&vecs, a, b));
        }
        i = j;
    }
    let mut sorted_vals = Vec::with_capacity(n);
    let mut sorted_vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vals.push(vals[src]);
        sorted_vecs.set_column(dst, &vecs.column(src));
    }

    let mut reduced = Vec::with_capacity(n);
    let mut mode_offsets = Vec::with_capacity(n);
    for &l in &sorted_vals {
        let (q, off) = fold(l, omega_r);
        reduced.push(q);
        mode_offsets.push(off);
    }

    FloquetEigensystem {
        eigenvalues: sorted_vals,
        eigenvectors: sorted_vecs,
        reduced,
        mode_offsets,
        degenerate,
        spinning_speed: omega_r,
        truncation: h.truncation,
    }
}

/// U(t) = P e^{-i lambda t} P^dag, the exact propagator of the truncated
/// Floquet Hamiltonian.
pub fn floquet_propagator(
    eig: &FloquetEigensystem,
    t: f64,
) -> Result<FloquetOperator, CoreError> {
    assert!(t >= 0.0, "propagation time must be non-negative");
    let rotor_period = 2.0 * std::f64::consts::PI / eig.spinning_speed;
    let periods = t / rotor_period;
    if periods > 1e6 {
        return Err(CoreError::TimeOverflow { periods });
    }
    let n = eig.eigenvalues.len();
    let phases = CVec::from_iterator(n, eig.eigenvalues.iter().map(|&l| (-I * l * t).exp()));
    let matrix = &eig.eigenvectors * CMat::from_diagonal(&phases) * eig.eigenvectors.adjoint();
    Ok(FloquetOperator::new(matrix, eig.truncation, eig.spinning_speed))
}
