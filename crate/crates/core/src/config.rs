//! JSON configuration file and its validation.
//!
//! ```json
//! {
//!   "ion1": { "mass_kg": 6.64e-26, "charge_multiple": 1 },
//!   "ion2": { "mass_kg": 6.64e-26, "charge_multiple": 1 },
//!   "trap1": { "frequency_hz": 1.0e6 },
//!   "trap2": { "frequency_hz": 1.0e6 },
//!   "geometry": {
//!     "r1_m": 2.5e-4, "r2_m": 2.5e-4,
//!     "d_eq1_m": 5.0e-5, "d_eq2_m": 5.0e-5,
//!     "wire_length_m": 1.0e-2, "wire_radius_m": 2.5e-5
//!   },
//!   "lumped": { "eta": 1.0, "gamma_factor": 1.0 }
//! }
//! ```
//!
//! Frequencies are ordinary frequencies in Hz and become ω = 2πf on load.
//! The `lumped` section is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::capacitance::{IsolatedConductors, SelfCapacitanceModel, SelfCapacitances};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result, Violation};
use crate::types::{CouplingGeometry, HarmonicTrap, IonSpecies};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonConfig {
    pub mass_kg: f64,
    pub charge_multiple: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub r1_m: f64,
    pub r2_m: f64,
    pub d_eq1_m: f64,
    pub d_eq2_m: f64,
    pub wire_length_m: f64,
    pub wire_radius_m: f64,
}

/// How the floating-conductor efficiency η is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaSetting {
    Value(f64),
    /// `"zeta"`: reuse the linear model's charge-sharing fraction as η.
    Estimator(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LumpedConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<EtaSetting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_factor: Option<f64>,
    /// Oscillation energy used by the energy-based capacitance. Defaults to
    /// the ground-state energy ħω/2 of each ion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillation_energy_j: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub ion1: IonConfig,
    pub ion2: IonConfig,
    pub trap1: TrapConfig,
    pub trap2: TrapConfig,
    pub geometry: GeometryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lumped: Option<LumpedConfig>,
}

impl Config {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: display.clone(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| Error::Parse {
            path: display,
            source,
        })
    }

    /// The reference setup: two Ca-40 ions at 1 MHz above 250 µm disks
    /// joined by a 1 cm wire.
    pub fn example() -> Self {
        let ion = IonConfig {
            mass_kg: 6.64e-26,
            charge_multiple: 1,
        };
        let trap = TrapConfig { frequency_hz: 1.0e6 };
        Config {
            ion1: ion.clone(),
            ion2: ion,
            trap1: trap.clone(),
            trap2: trap,
            geometry: GeometryConfig {
                r1_m: 2.5e-4,
                r2_m: 2.5e-4,
                d_eq1_m: 5.0e-5,
                d_eq2_m: 5.0e-5,
                wire_length_m: 1.0e-2,
                wire_radius_m: 2.5e-5,
            },
            lumped: None,
        }
    }
}

/// Validated lumped-model settings with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct LumpedSettings {
    pub eta: EtaChoice,
    pub gamma_factor: f64,
    pub oscillation_energy_j: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaChoice {
    Fixed(f64),
    FromZeta,
}

impl Default for LumpedSettings {
    fn default() -> Self {
        Self {
            eta: EtaChoice::Fixed(1.0),
            gamma_factor: 1.0,
            oscillation_energy_j: None,
        }
    }
}

/// A configuration with every invariant checked and derived quantities filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig {
    pub ion1: IonSpecies,
    pub ion2: IonSpecies,
    pub trap1: HarmonicTrap,
    pub trap2: HarmonicTrap,
    pub geometry: CouplingGeometry,
    pub capacitances: SelfCapacitances,
    pub lumped: LumpedSettings,
    /// Whether the file carried a `lumped` section at all.
    pub lumped_supplied: bool,
    pub constants: PhysicalConstants,
}

impl ValidatedConfig {
    pub fn q1(&self) -> f64 {
        self.ion1.charge(&self.constants)
    }

    pub fn q2(&self) -> f64 {
        self.ion2.charge(&self.constants)
    }

    pub fn k1(&self) -> f64 {
        self.trap1.spring_constant(&self.ion1)
    }

    pub fn k2(&self) -> f64 {
        self.trap2.spring_constant(&self.ion2)
    }
}

pub fn validate_config(config: &Config) -> Result<ValidatedConfig> {
    validate_config_with(config, PhysicalConstants::CODATA, &IsolatedConductors)
}

/// Checks every field and returns either the validated configuration or the
/// complete list of violations (not just the first).
pub fn validate_config_with(
    config: &Config,
    constants: PhysicalConstants,
    capacitance_model: &dyn SelfCapacitanceModel,
) -> Result<ValidatedConfig> {
    let mut errs = Vec::new();
    let mut positive = |path: &str, v: f64| {
        if !(v.is_finite() && v > 0.0) {
            errs.push(Violation::new(path, format!("must be finite and > 0, got {v}")));
        }
    };
    positive("ion1.mass_kg", config.ion1.mass_kg);
    positive("ion2.mass_kg", config.ion2.mass_kg);
    positive("trap1.frequency_hz", config.trap1.frequency_hz);
    positive("trap2.frequency_hz", config.trap2.frequency_hz);
    let g = &config.geometry;
    positive("geometry.r1_m", g.r1_m);
    positive("geometry.r2_m", g.r2_m);
    positive("geometry.d_eq1_m", g.d_eq1_m);
    positive("geometry.d_eq2_m", g.d_eq2_m);
    positive("geometry.wire_length_m", g.wire_length_m);
    positive("geometry.wire_radius_m", g.wire_radius_m);

    for (path, n) in [
        ("ion1.charge_multiple", config.ion1.charge_multiple),
        ("ion2.charge_multiple", config.ion2.charge_multiple),
    ] {
        if n < 1 || n > i64::from(u32::MAX) {
            errs.push(Violation::new(path, format!("must be a positive integer, got {n}")));
        }
    }
    if g.wire_length_m.is_finite()
        && g.wire_radius_m.is_finite()
        && g.wire_radius_m > 0.0
        && g.wire_length_m <= g.wire_radius_m
    {
        errs.push(Violation::new(
            "geometry.wire_length_m",
            "must exceed geometry.wire_radius_m",
        ));
    }

    let mut lumped = LumpedSettings::default();
    if let Some(l) = &config.lumped {
        match &l.eta {
            None => {}
            Some(EtaSetting::Value(v)) => {
                if (0.0..=1.0).contains(v) {
                    lumped.eta = EtaChoice::Fixed(*v);
                } else {
                    errs.push(Violation::new("lumped.eta", format!("must lie in [0, 1], got {v}")));
                }
            }
            Some(EtaSetting::Estimator(s)) if s == "zeta" => lumped.eta = EtaChoice::FromZeta,
            Some(EtaSetting::Estimator(s)) => errs.push(Violation::new(
                "lumped.eta",
                format!("expected a number in [0, 1] or \"zeta\", got \"{s}\""),
            )),
        }
        if let Some(gf) = l.gamma_factor {
            if gf.is_finite() && gf > 0.0 {
                lumped.gamma_factor = gf;
            } else {
                errs.push(Violation::new("lumped.gamma_factor", format!("must be > 0, got {gf}")));
            }
        }
        if let Some(e) = l.oscillation_energy_j {
            if e.is_finite() && e > 0.0 {
                lumped.oscillation_energy_j = Some(e);
            } else {
                errs.push(Violation::new(
                    "lumped.oscillation_energy_j",
                    format!("must be > 0, got {e}"),
                ));
            }
        }
    }

    if !errs.is_empty() {
        return Err(Error::InvalidConfig(errs));
    }

    let ion = |c: &IonConfig| IonSpecies {
        mass_kg: c.mass_kg,
        charge_multiple: c.charge_multiple as u32,
    };
    let geometry = CouplingGeometry {
        r1: g.r1_m,
        r2: g.r2_m,
        d_eq1: g.d_eq1_m,
        d_eq2: g.d_eq2_m,
        wire_length: g.wire_length_m,
        wire_radius: g.wire_radius_m,
    };
    let capacitances = capacitance_model
        .self_capacitances(&geometry, &constants)
        .map_err(|e| match e {
            Error::Validation(v) => Error::InvalidConfig(vec![Violation::new(
                format!("geometry ({})", v.field),
                v.reason,
            )]),
            other => other,
        })?;

    Ok(ValidatedConfig {
        ion1: ion(&config.ion1),
        ion2: ion(&config.ion2),
        trap1: HarmonicTrap::from_frequency_hz(config.trap1.frequency_hz)?,
        trap2: HarmonicTrap::from_frequency_hz(config.trap2.frequency_hz)?,
        geometry,
        capacitances,
        lumped,
        lumped_supplied: config.lumped.is_some(),
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn example_validates_with_derived_values() {
        let v = validate_config(&Config::example()).unwrap();
        let w = 2.0 * PI * 1e6;
        assert_eq!(v.trap1.angular_frequency, w);
        assert_eq!(v.k1(), 6.64e-26 * w * w);
        assert_eq!(v.q1(), PhysicalConstants::CODATA.elementary_charge);
        let s = v.capacitances;
        assert_eq!(s.total, s.c_disk1 + s.c_wire + s.c_disk2);
        assert!((s.total - 1.283e-13).abs() / 1.283e-13 < 1e-3);
    }

    #[test]
    fn negative_r1_is_named() {
        let mut c = Config::example();
        c.geometry.r1_m = -1e-4;
        let err = validate_config(&c).unwrap_err();
        assert!(err.to_string().contains("r1"), "{err}");
    }

    #[test]
    fn zero_mass_is_named() {
        let mut c = Config::example();
        c.ion2.mass_kg = 0.0;
        let err = validate_config(&c).unwrap_err();
        assert!(err.to_string().contains("mass"), "{err}");
    }

    #[test]
    fn all_violations_are_reported() {
        let mut c = Config::example();
        c.ion1.mass_kg = 0.0;
        c.ion1.charge_multiple = 0;
        c.geometry.d_eq2_m = -1.0;
        c.lumped = Some(LumpedConfig {
            eta: Some(EtaSetting::Value(1.5)),
            ..Default::default()
        });
        match validate_config(&c).unwrap_err() {
            Error::InvalidConfig(v) => {
                let fields: Vec<_> = v.iter().map(|x| x.field.as_str()).collect();
                assert_eq!(
                    fields,
                    ["ion1.mass_kg", "geometry.d_eq2_m", "ion1.charge_multiple", "lumped.eta"]
                );
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn wire_shorter_than_radius_rejected() {
        let mut c = Config::example();
        c.geometry.wire_length_m = 1e-5;
        let err = validate_config(&c).unwrap_err();
        assert!(err.to_string().contains("wire_length_m"));
    }

    #[test]
    fn eta_estimator_parses() {
        let text = serde_json::to_string(&Config::example()).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["lumped"] = serde_json::json!({ "eta": "zeta" });
        let c: Config = serde_json::from_value(value.clone()).unwrap();
        assert_eq!(validate_config(&c).unwrap().lumped.eta, EtaChoice::FromZeta);
        value["lumped"] = serde_json::json!({ "eta": "bogus" });
        let c: Config = serde_json::from_value(value).unwrap();
        assert!(validate_config(&c).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"ion1":{"mass_kg":1,"charge_multiple":1,"colour":"red"}}"#;
        assert!(Config::from_json(bad).is_err());
    }
}
