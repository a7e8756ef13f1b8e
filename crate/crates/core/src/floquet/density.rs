use num_complex::Complex64 as C64;

use super::mode::{FloquetIndex, ModeTruncation};
use super::operator::FloquetOperator;
use crate::error::CoreError;
use crate::linalg::{hermiticity_defect, CMat};

/// Density matrix on the truncated Floquet space, with pseudo-pure
/// bookkeeping: `purity` is the alpha of (1-alpha) I/N + alpha |phi><phi|
/// and `label` records the basis state when the pure part is |pm>.
#[derive(Debug, Clone)]
pub struct FloquetDensity {
    pub matrix: CMat,
    pub purity: f64,
    pub label: Option<FloquetIndex>,
    pub truncation: ModeTruncation,
}

impl FloquetDensity {
    pub fn new(matrix: CMat, purity: f64, label: Option<FloquetIndex>, trunc: ModeTruncation) -> Self {
        assert_eq!(matrix.nrows(), trunc.dim());
        assert_eq!(matrix.ncols(), trunc.dim());
        Self {
            matrix,
            purity,
            label,
            truncation: trunc,
        }
    }

    /// The pure basis-state density |pm><pm|.
    pub fn pure_state(idx: FloquetIndex, trunc: ModeTruncation) -> Self {
        let dim = trunc.dim();
        let i = idx.flatten(trunc);
        let mut m = CMat::zeros(dim, dim);
        m[(i, i)] = C64::new(1.0, 0.0);
        Self::new(m, 1.0, Some(idx), trunc)
    }

    /// Maximally mixed I/N.
    pub fn maximally_mixed(trunc: ModeTruncation) -> Self {
        let dim = trunc.dim();
        let m = CMat::identity(dim, dim) / C64::new(dim as f64, 0.0);
        Self::new(m, 0.0, None, trunc)
    }

    pub fn dim(&self) -> usize {
        self.truncation.dim()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// Traceless deviation from the maximally mixed state.
    pub fn deviation(&self) -> CMat {
        let dim = self.dim();
        let tr = self.trace() / C64::new(dim as f64, 0.0);
        &self.matrix - CMat::identity(dim, dim) * tr
    }

    /// Fidelity of the normalized deviation against a target pure state:
    /// <pm| dev |pm> / max-eigenvalue-scale, computed as the overlap of
    /// the deviation's dominant eigenvector with |pm>.
    pub fn pure_part_fidelity(&self, target: FloquetIndex) -> f64 {
        let dev = self.deviation();
        let (vals, vecs) = crate::linalg::eigh(&dev);
        // dominant positive eigenvector carries the pure part
        let last = vals.len() - 1;
        let v = vecs.column(last);
        let i = target.flatten(self.truncation);
        v[i].norm_sqr()
    }
}

/// Conjugate a density by a unitary: U sigma U^dag.
pub fn evolve(sigma: &FloquetDensity, u: &FloquetOperator) -> Result<FloquetDensity, CoreError> {
    if sigma.dim() != u.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: sigma.dim(),
            got: u.dim(),
        });
    }
    let m = &u.matrix * &sigma.matrix * u.matrix.adjoint();
    Ok(FloquetDensity::new(m, sigma.purity, None, sigma.truncation))
}
