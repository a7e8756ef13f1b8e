//! The four CLI verbs: spectrum emission, state preparation, the
//! four-item search, and the validation suite runner.

use serde::Serialize;
use std::path::Path;

use masfloq_core::floquet::{FloquetIndex, ModeTruncation};
use masfloq_core::grover::{default_working_states, preparation_operator, run_grover, GroverInstance};
use masfloq_core::prep::{
    apply_gradient_sandwich, pass_order_coefficients, simulate_pass_fid, solve_pass_sweep,
    solve_profile_weights, thermal_state, GradientEvent, InitialConvention,
};
use masfloq_core::readout::{
    analytic_fid, default_dwell, powder_fid, spectrum_of, Detection, PowderGrid,
};
use masfloq_core::shift::{
    sideband_amplitudes, spin_rotation, ProfileKind, PulsePhase, SidebandProfile, SpinParams,
    DEFAULT_QUADRATURE_POINTS,
};
use masfloq_core::validate::{run_suite, Suite, ValidationConfig, ValidationReport};
use masfloq_core::CoreError;
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use std::collections::BTreeMap;

use crate::config::ResolvedConfig;
use crate::output::{OutputDir, SCHEMA_VERSION};
use crate::Failure;

fn scientific(e: CoreError) -> Failure {
    Failure::scientific(format!("{e}"))
}

fn level(p: u8, m: i64, k: i64) -> Result<FloquetIndex, Failure> {
    if p > 1 {
        return Err(Failure::usage(format!("level p must be 0 or 1, got {p}")));
    }
    if m.abs() > k {
        return Err(Failure::usage(format!(
            "level m = {m} lies beyond the truncation order K = {k}"
        )));
    }
    Ok(FloquetIndex::new(p, m))
}

#[derive(Debug, Serialize)]
struct LevelRecord {
    p: u8,
    m: i64,
}

impl From<FloquetIndex> for LevelRecord {
    fn from(idx: FloquetIndex) -> Self {
        Self { p: idx.p, m: idx.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    Crystal,
    Powder,
}

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    schema_version: u32,
    mode: String,
    level: LevelRecord,
    truncation_order: i64,
    sideband_intensity_sum: f64,
    converged: bool,
    fid_points: usize,
    dwell_s: f64,
    broadening_hz: f64,
    powder_points: Option<usize>,
}

pub fn cmd_spectrum(
    cfg: &ResolvedConfig,
    p: u8,
    m: i64,
    mode: SpectrumMode,
    out: &Path,
) -> Result<(), Failure> {
    let k = cfg.truncation_order();
    let idx = level(p, m, k)?;
    let set = sideband_amplitudes(&cfg.params, &cfg.rotor, k, DEFAULT_QUADRATURE_POINTS);
    // a fixed truncation is an explicit detection window; only the
    // adaptive path promises a normalized sideband family
    if cfg.fixed_truncation.is_none() && !set.converged {
        return Err(Failure::scientific(format!(
            "sideband family unconverged at K = {k}: sum of intensities = {:.10} \
             (deficit {:.3e}); raise simulation.truncation",
            set.intensity_sum,
            1.0 - set.intensity_sum
        )));
    }
    let trunc = ModeTruncation::new(k);
    let dwell = default_dwell(&cfg.rotor);
    let (fid, powder_points) = match mode {
        SpectrumMode::Crystal => (
            analytic_fid(
                idx,
                &cfg.params,
                &cfg.rotor,
                trunc,
                Detection::Quadrature,
                cfg.fid_points,
                dwell,
            )
            .map_err(scientific)?,
            None,
        ),
        SpectrumMode::Powder => {
            let grid = PowderGrid::equal_area(cfg.powder_points);
            (
                powder_fid(
                    idx,
                    &cfg.params,
                    &cfg.rotor,
                    trunc,
                    &grid,
                    cfg.fid_points,
                    dwell,
                )
                .map_err(scientific)?,
                Some(cfg.powder_points),
            )
        }
    };
    let spectrum = spectrum_of(&fid, cfg.broadening_hz);
    let mode_name = match mode {
        SpectrumMode::Crystal => "crystal",
        SpectrumMode::Powder => "powder",
    };
    let mut dir = OutputDir::new(out, &format!("spectrum {mode_name}"));
    dir.add_text("fid.csv", fid.to_csv());
    dir.add_text("spectrum.csv", spectrum.to_csv());
    dir.add_json(
        "summary.json",
        &SpectrumSummary {
            schema_version: SCHEMA_VERSION,
            mode: mode_name.to_string(),
            level: idx.into(),
            truncation_order: k,
            sideband_intensity_sum: set.intensity_sum,
            converged: set.converged,
            fid_points: cfg.fid_points,
            dwell_s: dwell,
            broadening_hz: cfg.broadening_hz,
            powder_points,
        },
    )?;
    dir.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepareMethod {
    Pass,
    Gradient,
}

#[derive(Debug, Serialize)]
struct PassSummary {
    schema_version: u32,
    method: String,
    target_order: i64,
    n_pitches: usize,
    max_constraint_residual: f64,
    weight_residual: f64,
    realizable: bool,
    cross_method_max_rel_diff: f64,
}

fn prepare_pass(cfg: &ResolvedConfig, m: i64, out: &Path) -> Result<(), Failure> {
    let k_w = cfg.truncation_order() + 6;
    let coeffs = pass_order_coefficients(&cfg.params, &cfg.rotor, k_w);
    let n_pitch = (2 * k_w + 1) as usize;
    let pitches: Vec<f64> = (0..n_pitch)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_pitch as f64)
        .collect();
    let schedules = solve_pass_sweep(2, &pitches, cfg.seed).map_err(scientific)?;
    let max_residual = schedules
        .iter()
        .map(|s| s.constraint_residual())
        .fold(0.0, f64::max);
    let mut values = BTreeMap::new();
    values.insert(m, coeffs.get(m));
    let target = SidebandProfile {
        k: k_w,
        values,
        kind: ProfileKind::Target,
    };
    let weights = solve_profile_weights(&target, &pitches, &coeffs).map_err(scientific)?;
    // cross-check one schedule against the time-stepped simulation
    let fid = simulate_pass_fid(
        &schedules[0],
        &cfg.params,
        &cfg.rotor,
        64,
        cfg.rotor.period() / 64.0,
    )
    .map_err(scientific)?;
    let mut dir = OutputDir::new(out, "prepare pass");
    dir.add_json("schedules.json", &schedules)?;
    dir.add_json("weights.json", &weights)?;
    dir.add_json(
        "summary.json",
        &PassSummary {
            schema_version: SCHEMA_VERSION,
            method: "pass".to_string(),
            target_order: m,
            n_pitches: n_pitch,
            max_constraint_residual: max_residual,
            weight_residual: weights.residual,
            realizable: weights.realizable,
            cross_method_max_rel_diff: fid.max_rel_diff,
        },
    )?;
    dir.flush()?;
    if max_residual > 1e-10 {
        return Err(Failure::scientific(format!(
            "pulse-timing constraint residual {max_residual:.3e} exceeds 1e-10"
        )));
    }
    if !weights.realizable {
        return Err(Failure::scientific(format!(
            "target profile not realizable: weight residual {:.3e}",
            weights.residual
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct GradientSummary {
    schema_version: u32,
    method: String,
    target: LevelRecord,
    offset_during_gradients_hz: f64,
    first_moment: f64,
    second_moment: f64,
    tip_angle_deg: f64,
    z_samples: usize,
    fidelity: f64,
}

/// Gradient-sandwich pseudo-pure preparation. The two gradient events
/// are applied with the carrier offset set to half the spinning rate, so
/// the dephasing coefficients of the unwanted coherences are integers
/// and the z average cancels them exactly; the prepared center state is
/// then moved to the requested level by a two-level transfer pulse.
fn prepare_gradient(cfg: &ResolvedConfig, p: u8, m: i64, out: &Path) -> Result<(), Failure> {
    let trunc = ModeTruncation::new(2.max(m.abs()));
    if trunc.k > 2 {
        return Err(Failure::usage(format!(
            "gradient preparation supports |m| <= 2, got m = {m}; use the pass method"
        )));
    }
    let target = level(p, m, trunc.k)?;
    let offset = cfg.rotor.omega_r / 2.0;
    let params_g = SpinParams::isotropic(offset);
    let sigma0 = Matrix2::new(
        C64::new(0.75, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.25, 0.0),
    );
    let rho = thermal_state(&sigma0, trunc, InitialConvention::CenterMode);
    let tip_deg = 5.0_f64;
    let pulse = spin_rotation(tip_deg.to_radians(), PulsePhase::PlusX);
    let g1 = GradientEvent::new(Ratio::from_integer(14), Ratio::from_integer(1));
    let g2 = GradientEvent::new(Ratio::from_integer(2), Ratio::from_integer(1));
    let z_samples = 1024;
    let center = apply_gradient_sandwich(
        &rho, &g1, &g2, &pulse, &params_g, &cfg.rotor, z_samples,
    );
    let u = preparation_operator(FloquetIndex::new(0, 0), target, trunc, cfg.rotor.omega_r);
    let moved = &u.matrix * &center.matrix * u.matrix.adjoint();
    let final_state =
        masfloq_core::floquet::FloquetDensity::new(moved, center.purity, None, trunc);
    let fidelity = final_state.pure_part_fidelity(target);
    let mut dir = OutputDir::new(out, "prepare gradient");
    dir.add_json(
        "summary.json",
        &GradientSummary {
            schema_version: SCHEMA_VERSION,
            method: "gradient".to_string(),
            target: target.into(),
            offset_during_gradients_hz: offset / (2.0 * std::f64::consts::PI),
            first_moment: g1.moment_f64(),
            second_moment: g2.moment_f64(),
            tip_angle_deg: tip_deg,
            z_samples,
            fidelity,
        },
    )?;
    dir.flush()?;
    if fidelity < 0.999 {
        return Err(Failure::scientific(format!(
            "prepared-state fidelity {fidelity:.6} below 0.999"
        )));
    }
    Ok(())
}

pub fn cmd_prepare(
    cfg: &ResolvedConfig,
    p: u8,
    m: i64,
    method: PrepareMethod,
    out: &Path,
) -> Result<(), Failure> {
    let k = cfg.truncation_order();
    level(p, m, k)?;
    match method {
        PrepareMethod::Pass => prepare_pass(cfg, m, out),
        PrepareMethod::Gradient => prepare_gradient(cfg, p, m, out),
    }
}

#[derive(Debug, Serialize)]
struct GroverRecord {
    marked: LevelRecord,
    identified: LevelRecord,
    fidelity: f64,
    spectrum_file: String,
}

#[derive(Debug, Serialize)]
struct GroverSummary {
    schema_version: u32,
    compiled: bool,
    runs: Vec<GroverRecord>,
}

pub fn cmd_grover(
    cfg: &ResolvedConfig,
    marked: &str,
    compiled: bool,
    out: &Path,
) -> Result<(), Failure> {
    let working = default_working_states();
    let targets: Vec<FloquetIndex> = if marked == "all" {
        working.to_vec()
    } else {
        let i: usize = marked.parse().map_err(|_| {
            Failure::usage(format!(
                "--marked must be an index 0..=3 or \"all\", got {marked:?}"
            ))
        })?;
        if i > 3 {
            return Err(Failure::usage(format!(
                "--marked index out of range: {i} (working states are 0..=3)"
            )));
        }
        vec![working[i]]
    };
    let trunc = ModeTruncation::new(1);
    let mut dir = OutputDir::new(out, "grover");
    let mut runs = Vec::new();
    for target in targets {
        let outcome = run_grover(
            &GroverInstance::four_item(target),
            &cfg.params,
            &cfg.rotor,
            trunc,
            compiled,
        )
        .map_err(scientific)?;
        let name = format!("spectrum_p{}_m{}.csv", target.p, target.n);
        dir.add_text(&name, outcome.spectrum.to_csv());
        runs.push(GroverRecord {
            marked: target.into(),
            identified: outcome.identified.into(),
            fidelity: outcome.fidelity,
            spectrum_file: name,
        });
    }
    dir.add_json(
        "summary.json",
        &GroverSummary {
            schema_version: SCHEMA_VERSION,
            compiled,
            runs,
        },
    )?;
    dir.flush()?;
    Ok(())
}

pub fn cmd_validate(
    suite: Suite,
    seed: u64,
    out: Option<&Path>,
) -> Result<ValidationReport, Failure> {
    let report = run_suite(
        suite,
        &ValidationConfig {
            seed,
            truncation_override: None,
        },
    );
    for c in &report.checks {
        println!(
            "{}: {} (measured {:.3e}, requirement {})",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.measured,
            c.requirement
        );
    }
    if let Some(out) = out {
        let mut dir = OutputDir::new(out, "validate");
        dir.add_json("report.json", &report)?;
        dir.flush()?;
    }
    if !report.passed {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Failure::scientific(format!(
            "validation failed: {}",
            failed.join(", ")
        )));
    }
    Ok(report)
}
