use num_complex::Complex64 as C64;

use super::gates::{
    conditional_flip, hadamard_walsh, inversion_about_mean, restrict_to_levels, GateBlock,
};
use crate::error::CoreError;
use crate::floquet::{FloquetDensity, FloquetIndex, ModeTruncation};
use crate::linalg::CMat;
use crate::prep::{make_pseudo_pure, PseudoPureSpec};
use crate::readout::{
    analytic_fid, default_dwell, identify_state, spectrum_of, Detection, FidTrace,
    ReferenceLibrary, Spectrum,
};
use crate::shift::{RotorConfig, SpinParams};

/// Default working manifold of the four-item search: the four dressed
/// levels (p, m) with p in {0, 1} and m in {0, 1}.
pub fn default_working_states() -> [FloquetIndex; 4] {
    [
        FloquetIndex::new(0, 0),
        FloquetIndex::new(1, 0),
        FloquetIndex::new(0, 1),
        FloquetIndex::new(1, 1),
    ]
}

/// One four-item search: which level is marked and how many
/// amplitude-amplification rounds to run (one round is exact at four
/// items).
#[derive(Debug, Clone)]
pub struct GroverInstance {
    pub working_states: [FloquetIndex; 4],
    pub marked: FloquetIndex,
    pub iterations: usize,
}

impl GroverInstance {
    pub fn four_item(marked: FloquetIndex) -> Self {
        let working_states = default_working_states();
        assert!(
            working_states.contains(&marked),
            "marked state must be a working state"
        );
        Self {
            working_states,
            marked,
            iterations: 1,
        }
    }
}

/// Result of a search run: the final density, its readout spectrum, the
/// level the spectrum identifies, and the overlap of the final deviation
/// with the marked level.
#[derive(Debug, Clone)]
pub struct GroverOutcome {
    pub final_state: FloquetDensity,
    pub spectrum: Spectrum,
    pub identified: FloquetIndex,
    pub fidelity: f64,
}

/// Run the four-step search protocol: pseudo-pure preparation on the
/// first working state, the equal-superposition transform, `iterations`
/// rounds of conditional flip plus inversion about the mean, then
/// spectral readout and identification. With `compiled` the three gates
/// are realized as compiled two-level pulse blocks instead of the ideal
/// subspace matrices.
pub fn run_grover(
    instance: &GroverInstance,
    params: &SpinParams,
    rotor: &RotorConfig,
    trunc: ModeTruncation,
    compiled: bool,
) -> Result<GroverOutcome, CoreError> {
    let w = &instance.working_states;
    let speed = rotor.omega_r;

    let rho0 = make_pseudo_pure(&PseudoPureSpec {
        target: w[0],
        alpha: 0.5,
        truncation: trunc,
    })?;

    let mut gates: Vec<CMat> = Vec::new();
    let ideal = [
        hadamard_walsh(w, trunc, speed),
        conditional_flip(instance.marked, w, trunc, speed),
        inversion_about_mean(w, trunc, speed),
    ];
    for g in &ideal {
        if compiled {
            let target = restrict_to_levels(g, w);
            let block = GateBlock::compile(&target, w, trunc, speed);
            gates.push(block.net_unitary.matrix);
        } else {
            gates.push(g.matrix.clone());
        }
    }
    let (h, f, d) = (&gates[0], &gates[1], &gates[2]);

    let mut sigma = &*h * &rho0.matrix * h.adjoint();
    for _ in 0..instance.iterations {
        sigma = f * sigma * f.adjoint();
        sigma = d * sigma * d.adjoint();
    }
    let final_state = FloquetDensity::new(sigma, rho0.purity, None, trunc);
    let fidelity = final_state.pure_part_fidelity(instance.marked);

    // Spectral readout through the narrow-window line model: the final
    // density is diagonal in the dressed working basis, so its signal is
    // the population-weighted sum of the per-level line spectra -- the
    // same receiver model the reference library is built from. (A
    // wide-band receiver cannot distinguish the mode label at all: every
    // dressed level shows the same full sideband family.)
    let dwell = default_dwell(rotor);
    let n_samples = 1024;
    let mut samples = vec![C64::new(0.0, 0.0); n_samples];
    for p in 0..2u8 {
        for n in trunc.modes() {
            let idx = FloquetIndex::new(p, n);
            let w = final_state.matrix[(idx.flatten(trunc), idx.flatten(trunc))].re;
            if w.abs() < 1e-15 {
                continue;
            }
            let line =
                analytic_fid(idx, params, rotor, trunc, Detection::Quadrature, n_samples, dwell)?;
            for (s, l) in samples.iter_mut().zip(&line.samples) {
                *s += l * C64::new(w, 0.0);
            }
        }
    }
    let fid = FidTrace::new(dwell, samples, Detection::Quadrature);
    let spectrum = spectrum_of(&fid, 0.0);
    let library =
        ReferenceLibrary::single_crystal(params, rotor, trunc, trunc.k, n_samples, dwell, 0.0)?;
    let id = identify_state(&spectrum, &library)?;
    if id.index != instance.marked {
        return Err(CoreError::SearchFailed {
            identified: (id.index.p as usize, id.index.n),
            marked: (instance.marked.p as usize, instance.marked.n),
        });
    }

    Ok(GroverOutcome {
        final_state,
        spectrum,
        identified: id.index,
        fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::EulerAngles;
    use std::f64::consts::PI;

    fn fig_params() -> (SpinParams, RotorConfig) {
        (
            SpinParams::new(
                2.0 * PI * 250.0,
                2.0 * PI * 20_000.0,
                0.5,
                EulerAngles::from_degrees(30.0, 60.0, 0.0),
            ),
            RotorConfig::magic(2.0 * PI * 4000.0),
        )
    }

    #[test]
    fn ideal_search_finds_each_marked_item_exactly() {
        let (params, rotor) = fig_params();
        let trunc = ModeTruncation::new(1);
        for marked in default_working_states() {
            let out = run_grover(
                &GroverInstance::four_item(marked),
                &params,
                &rotor,
                trunc,
                false,
            )
            .unwrap();
            assert!(out.fidelity >= 1.0 - 1e-12, "fidelity {}", out.fidelity);
            assert_eq!(out.identified, marked);
            // the marked diagonal entry carries the whole deviation
            let i = marked.flatten(trunc);
            let alpha = 0.5;
            let uniform = (1.0 - alpha) / trunc.dim() as f64;
            assert!(
                (out.final_state.matrix[(i, i)].re - (uniform + alpha)).abs() < 1e-12
            );
        }
    }

    #[test]
    fn compiled_search_matches_the_ideal_one() {
        let (params, rotor) = fig_params();
        let trunc = ModeTruncation::new(1);
        for marked in [FloquetIndex::new(0, 0), FloquetIndex::new(1, 1)] {
            let instance = GroverInstance::four_item(marked);
            let ideal = run_grover(&instance, &params, &rotor, trunc, false).unwrap();
            let comp = run_grover(&instance, &params, &rotor, trunc, true).unwrap();
            assert!(comp.fidelity >= 0.999, "fidelity {}", comp.fidelity);
            assert_eq!(comp.identified, marked);
            let diff = crate::linalg::max_abs_diff(
                &comp.final_state.matrix,
                &ideal.final_state.matrix,
            );
            assert!(diff < 1e-9, "state diff {diff}");
        }
    }

    #[test]
    fn the_four_outcomes_have_distinct_spectra() {
        let (params, rotor) = fig_params();
        let trunc = ModeTruncation::new(1);
        let spectra: Vec<Vec<C64>> = default_working_states()
            .iter()
            .map(|&marked| {
                run_grover(
                    &GroverInstance::four_item(marked),
                    &params,
                    &rotor,
                    trunc,
                    false,
                )
                .unwrap()
                .spectrum
                .amplitudes()
            })
            .collect();
        for a in 0..4 {
            for b in (a + 1)..4 {
                let na: f64 = spectra[a].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let nb: f64 = spectra[b].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let dot: C64 = spectra[a]
                    .iter()
                    .zip(&spectra[b])
                    .map(|(x, y)| x * y.conj())
                    .sum();
                let corr = dot.re / (na * nb);
                assert!(corr < 0.9, "spectra {a} and {b} correlate at {corr}");
            }
        }
    }

    #[test]
    fn zero_iterations_leave_the_superposition_unidentifiable() {
        let (params, rotor) = fig_params();
        let trunc = ModeTruncation::new(1);
        let mut instance = GroverInstance::four_item(FloquetIndex::new(1, 0));
        instance.iterations = 0;
        let err = run_grover(&instance, &params, &rotor, trunc, false);
        assert!(
            matches!(
                err,
                Err(CoreError::AmbiguousReadout { .. }) | Err(CoreError::SearchFailed { .. })
            ),
            "got {err:?}"
        );
    }
}
