//! Experiment configuration: a strict TOML schema with frequencies in
//! Hz (or ppm against a stated carrier), angles in degrees, converted
//! to the core's radian/angular-frequency units once at ingestion.
//! Unknown keys are rejected with the offending location.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use masfloq_core::shift::{adaptive_truncation, EulerAngles, RotorConfig, SpinParams};

use crate::Failure;

pub const MAGIC_ANGLE_DEG: f64 = 54.7356;

/// The spinning-sideband truncation order: a fixed cutoff or "auto"
/// (adaptive, grown until the sideband family is normalized).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruncationSpec {
    Fixed(i64),
    Named(String),
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec::Named("auto".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropic_shift_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropic_shift_ppm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anisotropy_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anisotropy_ppm: Option<f64>,
    /// Carrier frequency in MHz; required when any field is given in ppm.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_mhz: Option<f64>,
    pub asymmetry: f64,
    #[serde(default)]
    pub alpha_deg: f64,
    #[serde(default)]
    pub beta_deg: f64,
    #[serde(default)]
    pub gamma_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorSection {
    pub spinning_rate_hz: f64,
    #[serde(default = "default_rotor_angle")]
    pub angle_deg: f64,
}

fn default_rotor_angle() -> f64 {
    MAGIC_ANGLE_DEG
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct SimulationSection {
    pub truncation: TruncationSpec,
    pub powder_points: usize,
    pub fid_points: usize,
    pub broadening_hz: f64,
    pub seed: u64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            truncation: TruncationSpec::default(),
            powder_points: 1154,
            fid_points: 1024,
            broadening_hz: 0.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spin: SpinSection,
    pub rotor: RotorSection,
    #[serde(default)]
    pub simulation: SimulationSection,
}

/// Configuration after unit conversion and truncation resolution.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub params: SpinParams,
    pub rotor: RotorConfig,
    /// Sideband truncation order; `None` means adaptive.
    pub fixed_truncation: Option<i64>,
    pub powder_points: usize,
    pub fid_points: usize,
    pub broadening_hz: f64,
    pub seed: u64,
}

impl ResolvedConfig {
    pub fn truncation_order(&self) -> i64 {
        self.fixed_truncation
            .unwrap_or_else(|| adaptive_truncation(&self.params, &self.rotor))
    }
}

fn hz_or_ppm(
    what: &str,
    hz: Option<f64>,
    ppm: Option<f64>,
    carrier_mhz: Option<f64>,
) -> Result<f64, Failure> {
    match (hz, ppm) {
        (Some(v), None) => Ok(v),
        (None, Some(p)) => {
            let carrier = carrier_mhz.ok_or_else(|| {
                Failure::usage(format!(
                    "spin.{what}_ppm requires spin.carrier_mhz to convert to Hz"
                ))
            })?;
            Ok(p * carrier)
        }
        (Some(_), Some(_)) => Err(Failure::usage(format!(
            "give either spin.{what}_hz or spin.{what}_ppm, not both"
        ))),
        (None, None) => Err(Failure::usage(format!(
            "missing spin.{what}_hz (or spin.{what}_ppm with spin.carrier_mhz)"
        ))),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::usage(format!("invalid config: {e}")))
    }

    pub fn resolve(&self) -> Result<ResolvedConfig, Failure> {
        let d0_hz = hz_or_ppm(
            "isotropic_shift",
            self.spin.isotropic_shift_hz,
            self.spin.isotropic_shift_ppm,
            self.spin.carrier_mhz,
        )?;
        let delta_hz = hz_or_ppm(
            "anisotropy",
            self.spin.anisotropy_hz,
            self.spin.anisotropy_ppm,
            self.spin.carrier_mhz,
        )?;
        if delta_hz < 0.0 {
            return Err(Failure::usage(format!(
                "spin anisotropy must be non-negative, got {delta_hz} Hz"
            )));
        }
        if !(0.0..=1.0).contains(&self.spin.asymmetry) {
            return Err(Failure::usage(format!(
                "spin.asymmetry must lie in [0, 1], got {}",
                self.spin.asymmetry
            )));
        }
        if self.rotor.spinning_rate_hz <= 0.0 {
            return Err(Failure::usage(format!(
                "rotor.spinning_rate_hz must be positive, got {}",
                self.rotor.spinning_rate_hz
            )));
        }
        let fixed_truncation = match &self.simulation.truncation {
            TruncationSpec::Fixed(k) => {
                if *k < 1 {
                    return Err(Failure::usage(format!(
                        "simulation.truncation must be >= 1, got {k}"
                    )));
                }
                Some(*k)
            }
            TruncationSpec::Named(s) if s == "auto" => None,
            TruncationSpec::Named(s) => {
                return Err(Failure::usage(format!(
                    "simulation.truncation must be an integer or \"auto\", got {s:?}"
                )));
            }
        };
        let params = SpinParams::new(
            2.0 * PI * d0_hz,
            2.0 * PI * delta_hz,
            self.spin.asymmetry,
            EulerAngles::from_degrees(self.spin.alpha_deg, self.spin.beta_deg, self.spin.gamma_deg),
        );
        let rotor = RotorConfig::new(
            2.0 * PI * self.rotor.spinning_rate_hz,
            self.rotor.angle_deg.to_radians(),
        );
        Ok(ResolvedConfig {
            params,
            rotor,
            fixed_truncation,
            powder_points: self.simulation.powder_points,
            fid_points: self.simulation.fid_points,
            broadening_hz: self.simulation.broadening_hz,
            seed: self.simulation.seed,
        })
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    ExperimentConfig::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_CONFIG: &str = r#"
[spin]
isotropic_shift_hz = 250.0
anisotropy_hz = 20000.0
asymmetry = 0.5
alpha_deg = 30.0
beta_deg = 60.0

[rotor]
spinning_rate_hz = 4000.0
"#;

    #[test]
    fn parse_serialize_parse_round_trips() {
        let a = ExperimentConfig::parse(FIG_CONFIG).unwrap();
        let text = toml::to_string(&a).unwrap();
        let b = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_keys_are_rejected_with_the_key_name() {
        let bad = format!("{FIG_CONFIG}\n[simulation]\nbogus_knob = 3\n");
        let err = ExperimentConfig::parse(&bad).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("bogus_knob"), "diagnostic was: {msg}");
    }

    #[test]
    fn rotor_angle_defaults_to_the_magic_angle() {
        let cfg = ExperimentConfig::parse(FIG_CONFIG).unwrap();
        let resolved = cfg.resolve().unwrap();
        assert!((resolved.rotor.theta - masfloq_core::shift::MAGIC_ANGLE).abs() < 1e-6);
    }

    #[test]
    fn ppm_fields_convert_against_the_carrier() {
        let text = r#"
[spin]
isotropic_shift_hz = 0.0
anisotropy_ppm = 100.0
carrier_mhz = 50.3
asymmetry = 0.3

[rotor]
spinning_rate_hz = 5000.0
"#;
        let resolved = ExperimentConfig::parse(text).unwrap().resolve().unwrap();
        assert!((resolved.params.delta - 2.0 * PI * 5030.0).abs() < 1e-6);
    }

    #[test]
    fn both_hz_and_ppm_for_one_field_is_a_usage_error() {
        let text = r#"
[spin]
isotropic_shift_hz = 0.0
anisotropy_hz = 100.0
anisotropy_ppm = 100.0
carrier_mhz = 50.3
asymmetry = 0.3

[rotor]
spinning_rate_hz = 5000.0
"#;
        let err = ExperimentConfig::parse(text).unwrap().resolve().unwrap_err();
        assert!(format!("{err}").contains("not both"));
    }

    #[test]
    fn auto_truncation_resolves_adaptively() {
        let cfg = ExperimentConfig::parse(FIG_CONFIG).unwrap();
        let resolved = cfg.resolve().unwrap();
        assert!(resolved.fixed_truncation.is_none());
        assert!(resolved.truncation_order() >= 5);
    }
}
