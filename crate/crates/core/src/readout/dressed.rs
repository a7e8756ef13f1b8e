use num_complex::Complex64 as C64;

use crate::error::CoreError;
use crate::floquet::{FloquetDensity, FloquetIndex, ModeTruncation};
use crate::linalg::{eigh, CMat, CVec};
use crate::shift::{cs_floquet_hamiltonian, effective_isotropic_shift, RotorConfig, SpinParams};

/// Dressed level |p m> of the spinning chemical shift: the Floquet
/// eigenstate in spin sector p whose quasienergy sits at
/// m w_r + eps_p delta0'/2. The Hamiltonian never mixes the two spin
/// levels, so each sector diagonalizes on its own (2K+1)-dimensional mode
/// ladder; sorting sector eigenvalues ascending recovers the m labels as
/// long as |delta0'| < w_r (one level per Brillouin zone).
///
/// At delta = 0 the dressed level reduces to the bare basis state |p m>;
/// with anisotropy it acquires mode structure of the same half-width as
/// the sideband manifold.
pub fn floquet_level_state(
    params: &SpinParams,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
    idx: FloquetIndex,
) -> Result<CVec, CoreError> {
    if !trunc.contains(idx.n) {
        return Err(CoreError::ModeOutOfRange {
            m: idx.n,
            k: trunc.k,
        });
    }
    let delta0p = effective_isotropic_shift(params, rotor);
    assert!(
        delta0p.abs() < rotor.omega_r,
        "effective shift exceeds one Brillouin zone; m labels would alias"
    );

    let h = cs_floquet_hamiltonian(params, rotor, trunc)?;
    let md = trunc.mode_dim();
    let mut sector = CMat::zeros(md, md);
    for (a, na) in trunc.modes().enumerate() {
        for (b, nb) in trunc.modes().enumerate() {
            sector[(a, b)] = h.matrix[(
                FloquetIndex::new(idx.p, na).flatten(trunc),
                FloquetIndex::new(idx.p, nb).flatten(trunc),
            )];
        }
    }
    let (_, vecs) = eigh(&sector);
    let col = (idx.n + trunc.k) as usize;

    // fix the free phase: the dominant on-mode component real positive
    let pivot = vecs[(col, col)];
    let corr = if pivot.norm() > 1e-12 {
        pivot.conj() / pivot.norm()
    } else {
        C64::new(1.0, 0.0)
    };

    let mut out = CVec::zeros(trunc.dim());
    for (a, na) in trunc.modes().enumerate() {
        out[FloquetIndex::new(idx.p, na).flatten(trunc)] = vecs[(a, col)] * corr;
    }
    Ok(out)
}

/// Density matrix |pm><pm| of a dressed level.
pub fn dressed_density(
    params: &SpinParams,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
    idx: FloquetIndex,
) -> Result<FloquetDensity, CoreError> {
    let v = floquet_level_state(params, rotor, trunc, idx)?;
    let m = &v * v.adjoint();
    Ok(FloquetDensity::new(m, 1.0, Some(idx), trunc))
}
