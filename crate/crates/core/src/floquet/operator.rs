use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::mode::ModeTruncation;
use crate::error::CoreError;
use crate::linalg::{hermiticity_defect, unitarity_defect, CMat, I};

/// Dense complex operator on the truncated Floquet space.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    pub matrix: CMat,
    pub truncation: ModeTruncation,
    pub spinning_speed: f64,
}

impl FloquetOperator {
    pub fn new(matrix: CMat, truncation: ModeTruncation, spinning_speed: f64) -> Self {
        assert_eq!(matrix.nrows(), truncation.dim());
        assert_eq!(matrix.ncols(), truncation.dim());
        Self {
            matrix,
            truncation,
            spinning_speed,
        }
    }

    pub fn zeros(truncation: ModeTruncation, spinning_speed: f64) -> Self {
        Self::new(
            CMat::zeros(truncation.dim(), truncation.dim()),
            truncation,
            spinning_speed,
        )
    }

    pub fn identity(truncation: ModeTruncation, spinning_speed: f64) -> Self {
        Self::new(
            CMat::identity(truncation.dim(), truncation.dim()),
            truncation,
            spinning_speed,
        )
    }

    pub fn dim(&self) -> usize {
        self.truncation.dim()
    }

    /// The 2x2 spin block coupling row mode `m` to column mode `n`.
    pub fn block(&self, m: i64, n: i64) -> Matrix2<C64> {
        let r = ((m + self.truncation.k) * 2) as usize;
        let c = ((n + self.truncation.k) * 2) as usize;
        Matrix2::new(
            self.matrix[(r, c)],
            self.matrix[(r, c + 1)],
            self.matrix[(r + 1, c)],
            self.matrix[(r + 1, c + 1)],
        )
    }

    pub fn set_block(&mut self, m: i64, n: i64, b: &Matrix2<C64>) {
        let r = ((m + self.truncation.k) * 2) as usize;
        let c = ((n + self.truncation.k) * 2) as usize;
        for i in 0..2 {
            for j in 0..2 {
                self.matrix[(r + i, c + j)] = b[(i, j)];
            }
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }
}

/// Build the Floquet Hamiltonian from Fourier blocks of the periodic
/// Hamiltonian: <pm|H_F|qn> = h_pq^{m-n} + n*omega_r on the block
/// diagonal. Input blocks must satisfy h^{-k} = (h^k)^dag.
pub fn assemble_floquet_hamiltonian(
    fourier_blocks: &BTreeMap<i64, Matrix2<C64>>,
    omega_r: f64,
    trunc: ModeTruncation,
) -> Result<FloquetOperator, CoreError> {
    for (&k, block) in fourier_blocks {
        let partner = fourier_blocks
            .get(&-k)
            .copied()
            .unwrap_or_else(Matrix2::zeros);
        let defect = (block - partner.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if defect > 1e-12 {
            return Err(CoreError::NonHermitianBlock { offset: k, defect });
        }
    }

    let mut op = FloquetOperator::zeros(trunc, omega_r);
    for m in trunc.modes() {
        for n in trunc.modes() {
            if let Some(block) = fourier_blocks.get(&(m - n)) {
                op.set_block(m, n, block);
            }
        }
    }
    for n in trunc.modes() {
        for p in 0..2i64 {
            let idx = ((n + trunc.k) * 2 + p) as usize;
            op.matrix[(idx, idx)] += C64::new(n as f64 * omega_r, 0.0);
        }
    }
    Ok(op)
}

/// Lift a periodically time-dependent observable A(t) = sum_n A_n
/// e^{-i n omega_r t} into Floquet space: A^F = sum_{n,m} A_{n-m} |n><m|.
/// Components with |offset| > 2K cannot couple any retained modes; their
/// offsets are returned so callers can warn.
pub fn formalize_observable(
    components: &BTreeMap<i64, Matrix2<C64>>,
    omega_r: f64,
    trunc: ModeTruncation,
) -> (FloquetOperator, Vec<i64>) {
    let dropped: Vec<i64> = components
        .keys()
        .copied()
        .filter(|k| k.abs() > 2 * trunc.k)
        .collect();
    let mut op = FloquetOperator::zeros(trunc, omega_r);
    for m in trunc.modes() {
        for n in trunc.modes() {
            if let Some(block) = components.get(&(m - n)) {
                op.set_block(m, n, block);
            }
        }
    }
    (op, dropped)
}

/// Formalized detection operator at acquisition time `t`:
/// every block at mode offset m (= column - row) is D e^{-i m omega_r t}.
pub fn detection_operator(
    d: &Matrix2<C64>,
    t: f64,
    omega_r: f64,
    trunc: ModeTruncation,
) -> FloquetOperator {
    let mut op = FloquetOperator::zeros(trunc, omega_r);
    for row in trunc.modes() {
        for col in trunc.modes() {
            let m = col - row;
            let phase = (-I * (m as f64) * omega_r * t).exp();
            op.set_block(row, col, &(d * phase));
        }
    }
    op
}

/// Contract a Floquet propagator down to the 2x2 Hilbert-space propagator:
/// U_pq(t) = sum_n <pn|U^F|q0> e^{i n omega_r t}.
pub fn contract_propagator(u: &FloquetOperator, t: f64) -> Matrix2<C64> {
    let trunc = u.truncation;
    let mut out = Matrix2::zeros();
    for n in trunc.modes() {
        let phase = (I * (n as f64) * u.spinning_speed * t).exp();
        let block = u.block(n, 0);
        out += block * phase;
    }
    out
}
