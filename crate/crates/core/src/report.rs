//! Run reports and their JSON, CSV and text renderings.
//!
//! Every numeric key carries its SI unit as a suffix (`_n_per_m`, `_f`, ...);
//! dimensionless quantities have none. Floats are written in scientific
//! notation with 12 significant digits, keys in sorted order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Config, EtaChoice, ValidatedConfig};
use crate::error::{Error, Result};
use crate::linear::{self, CapacitanceRatio, ChargeSharing};
use crate::lumped::{self, LumpedElements, LumpedInputs, PlateCoupling, PlateCouplingInputs};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSelector {
    Linear,
    Lumped,
    Both,
}

impl ModelSelector {
    fn linear(self) -> bool {
        matches!(self, ModelSelector::Linear | ModelSelector::Both)
    }

    fn lumped(self) -> bool {
        matches!(self, ModelSelector::Lumped | ModelSelector::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSection {
    pub a12_c_per_m: f64,
    pub zeta: f64,
    pub a34_n_per_c: f64,
    pub gamma_n_per_m: f64,
    /// γ with the roles of the two ions exchanged.
    pub gamma_reverse_n_per_m: f64,
    /// Absent when the two traps differ in frequency or mass.
    pub g_rad_per_s: Option<f64>,
    pub t_swap_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LumpedSection {
    pub ion1: LumpedElements,
    pub ion2: LumpedElements,
    pub c_conductor_f: f64,
    pub gamma_factor: f64,
    pub gamma_plate: PlateCoupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    /// γ_linear / γ_plate (exact circuit form).
    pub gamma_linear_over_plate: f64,
    pub g_linear_rad_per_s: Option<f64>,
    pub t_swap_linear_s: Option<f64>,
    pub g_plate_rad_per_s: Option<f64>,
    pub t_swap_plate_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub timestamp_unix_s: Option<u64>,
}

impl Provenance {
    pub fn new(with_timestamp: bool) -> Self {
        let timestamp_unix_s = with_timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: Config,
    pub model: ModelSelector,
    pub linear: Option<LinearSection>,
    pub lumped: Option<LumpedSection>,
    pub ratios: Option<Ratios>,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

pub fn linear_section(v: &ValidatedConfig, sharing: &dyn ChargeSharing, warnings: &mut Vec<String>) -> Result<LinearSection> {
    let f = linear::coupling_factors(v, sharing)?;
    let reverse = linear::reverse_coupling_factors(v, sharing)?;
    let (g, t) = match linear::rabi_coupling_for(v, f.gamma) {
        Ok(r) => (Some(r.g_rad_per_s), Some(r.t_swap_s)),
        Err(Error::Unsupported(msg)) => {
            warnings.push(format!("g and t_swap omitted: {msg}"));
            (None, None)
        }
        Err(e) => return Err(e),
    };
    Ok(LinearSection {
        a12_c_per_m: f.a12,
        zeta: f.zeta,
        a34_n_per_c: f.a34,
        gamma_n_per_m: f.gamma,
        gamma_reverse_n_per_m: reverse.gamma,
        g_rad_per_s: g,
        t_swap_s: t,
    })
}

pub fn lumped_section(v: &ValidatedConfig) -> Result<LumpedSection> {
    let eta = match v.lumped.eta {
        EtaChoice::Fixed(x) => x,
        EtaChoice::FromZeta => CapacitanceRatio.zeta(&v.capacitances)?,
    };
    let per_ion = |ion: &crate::types::IonSpecies, trap: &crate::types::HarmonicTrap, d: f64| {
        lumped::lumped_elements(
            &LumpedInputs {
                mass_kg: ion.mass_kg,
                angular_frequency: trap.angular_frequency,
                charge_multiple: ion.charge_multiple,
                plate_separation_m: d,
                oscillation_energy_j: v
                    .lumped
                    .oscillation_energy_j
                    .unwrap_or_else(|| lumped::ground_state_energy(trap.angular_frequency, &v.constants)),
                eta,
            },
            &v.constants,
        )
    };
    let ion1 = per_ion(&v.ion1, &v.trap1, v.geometry.d_eq1)?;
    let ion2 = per_ion(&v.ion2, &v.trap2, v.geometry.d_eq2)?;
    let gamma_plate = lumped::gamma_parallel_plate(&PlateCouplingInputs {
        mass_kg: v.ion1.mass_kg,
        angular_frequency: v.trap1.angular_frequency,
        c1_hyb: ion1.c_hyb_b_actual_f,
        c2_hyb: ion2.c_hyb_b_actual_f,
        c_total: v.capacitances.total,
        gamma_factor: v.lumped.gamma_factor,
        q1: v.q1(),
        q2: v.q2(),
        d1: v.geometry.d_eq1,
        d2: v.geometry.d_eq2,
    })?;
    Ok(LumpedSection {
        ion1,
        ion2,
        c_conductor_f: v.capacitances.total,
        gamma_factor: v.lumped.gamma_factor,
        gamma_plate,
    })
}

fn unused_lumped_fields(config: &Config) -> Vec<&'static str> {
    let Some(l) = &config.lumped else {
        return Vec::new();
    };
    let mut fields = Vec::new();
    if l.eta.is_some() {
        fields.push("lumped.eta");
    }
    if l.gamma_factor.is_some() {
        fields.push("lumped.gamma_factor");
    }
    if l.oscillation_energy_j.is_some() {
        fields.push("lumped.oscillation_energy_j");
    }
    if fields.is_empty() {
        fields.push("lumped");
    }
    fields
}

/// Evaluates the selected models for an already validated configuration.
pub fn build_report(config: &Config, v: &ValidatedConfig, model: ModelSelector, with_timestamp: bool) -> Result<RunReport> {
    let mut warnings = Vec::new();
    if model == ModelSelector::Linear {
        for field in unused_lumped_fields(config) {
            warnings.push(format!("{field} ignored: model = linear"));
        }
    }
    let linear = model
        .linear()
        .then(|| linear_section(v, &CapacitanceRatio, &mut warnings))
        .transpose()?;
    if let Some(l) = &linear {
        if (l.gamma_n_per_m - l.gamma_reverse_n_per_m).abs() > 1e-12 * l.gamma_n_per_m.abs() {
            warnings.push("asymmetric geometry: gamma differs between the two directions".into());
        }
    }
    let lumped = model.lumped().then(|| lumped_section(v)).transpose()?;
    let ratios = match (&linear, &lumped) {
        (Some(l), Some(p)) => {
            let plate = p.gamma_plate.exact_n_per_m;
            let rabi_plate = linear::rabi_coupling_for(v, plate).ok();
            Some(Ratios {
                gamma_linear_over_plate: l.gamma_n_per_m / plate,
                g_linear_rad_per_s: l.g_rad_per_s,
                t_swap_linear_s: l.t_swap_s,
                g_plate_rad_per_s: rabi_plate.map(|r| r.g_rad_per_s),
                t_swap_plate_s: rabi_plate.map(|r| r.t_swap_s),
            })
        }
        _ => None,
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(RunReport {
        config: config.clone(),
        model,
        linear,
        lumped,
        ratios,
        warnings,
        provenance: Provenance::new(with_timestamp),
    })
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    } else {
        "null".to_string()
    }
}

fn write_scalar(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        other => out.push_str(&other.to_string()),
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(k.clone()));
                write_json(out, val, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", "  ".repeat(indent));
        }
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, val) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(out, val, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", "  ".repeat(indent));
        }
        other => write_scalar(out, other),
    }
}

/// Pretty JSON with sorted keys and fixed-precision floats.
pub fn to_stable_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    let mut out = String::new();
    write_json(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// Dotted-path leaves of a JSON value, in key order.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, val, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

impl RunReport {
    /// Numeric result columns: the linear, lumped and ratios sections that
    /// are present, each in key order.
    pub fn columns(&self) -> Result<Vec<(String, Value)>> {
        let v = serde_json::to_value(self).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
        let mut cols = Vec::new();
        for section in ["linear", "lumped", "ratios"] {
            if let Some(s) = v.get(section).filter(|s| !s.is_null()) {
                flatten(section, s, &mut cols);
            }
        }
        Ok(cols)
    }

    pub fn emit(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => to_stable_json(self),
            ReportFormat::Csv => {
                let cols = self.columns()?;
                Ok(format!("{}\n{}\n", csv_header(&cols), csv_row(&cols)))
            }
            ReportFormat::Text => self.emit_text(),
        }
    }

    fn emit_text(&self) -> Result<String> {
        let cols = self.columns()?;
        let width = cols.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}  model = {}",
            self.provenance.tool,
            self.provenance.version,
            serde_json::to_value(self.model).ok().and_then(|m| m.as_str().map(String::from)).unwrap_or_default()
        );
        for (k, v) in &cols {
            let _ = writeln!(out, "  {k:<width$}  {}", cell(v));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        Ok(out)
    }
}

pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => {
            let mut s = String::new();
            write_scalar(&mut s, other);
            s
        }
    }
}

pub fn csv_header(cols: &[(String, Value)]) -> String {
    cols.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",")
}

pub fn csv_row(cols: &[(String, Value)]) -> String {
    cols.iter().map(|(_, v)| cell(v)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{validate_config, EtaSetting, LumpedConfig};
    use approx::assert_relative_eq;

    fn report(model: ModelSelector) -> RunReport {
        let c = Config::example();
        let v = validate_config(&c).unwrap();
        build_report(&c, &v, model, false).unwrap()
    }

    #[test]
    fn example_magnitudes() {
        let r = report(ModelSelector::Both);
        let l = r.linear.as_ref().unwrap();
        let p = r.lumped.as_ref().unwrap();
        assert_relative_eq!(l.gamma_n_per_m, 3.6e-19, max_relative = 0.05);
        assert_relative_eq!(p.gamma_plate.geometric_n_per_m, 8.0e-17, max_relative = 0.01);
        assert_relative_eq!(p.gamma_plate.exact_n_per_m, p.gamma_plate.geometric_n_per_m, max_relative = 1e-4);
        assert!(r.ratios.unwrap().gamma_linear_over_plate < 0.01);
        assert_eq!(l.gamma_n_per_m, l.gamma_reverse_n_per_m);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(3.6e-19), "3.60000000000e-19");
        assert_eq!(format_float(-1.0), "-1.00000000000e0");
        assert_eq!(format_float(f64::NAN), "null");
        let back: f64 = format_float(std::f64::consts::PI).parse().unwrap();
        assert_relative_eq!(back, std::f64::consts::PI, max_relative = 1e-12);
    }

    #[test]
    fn json_is_deterministic_and_sorted() {
        let a = report(ModelSelector::Both).emit(ReportFormat::Json).unwrap();
        let b = report(ModelSelector::Both).emit(ReportFormat::Json).unwrap();
        assert_eq!(a, b);
        let i_config = a.find("\"config\"").unwrap();
        let i_linear = a.find("\"linear\"").unwrap();
        let i_warnings = a.find("\"warnings\"").unwrap();
        assert!(i_config < i_linear && i_linear < i_warnings);
    }

    #[test]
    fn json_round_trip_is_a_fixed_point() {
        let r = report(ModelSelector::Both);
        let text = r.emit(ReportFormat::Json).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.emit(ReportFormat::Json).unwrap(), text);
        let l0 = r.linear.unwrap();
        let l1 = back.linear.unwrap();
        assert_relative_eq!(l0.gamma_n_per_m, l1.gamma_n_per_m, max_relative = 1e-11);
        assert_eq!(back.config, r.config);
    }

    #[test]
    fn csv_matches_json() {
        let r = report(ModelSelector::Both);
        let json: Value = serde_json::from_str(&r.emit(ReportFormat::Json).unwrap()).unwrap();
        let csv = r.emit(ReportFormat::Csv).unwrap();
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(header.len(), row.len());
        assert!(header.contains(&"lumped.ion1.c_hyb_a_f"));
        for (k, cell) in header.iter().zip(&row) {
            let pointer = format!("/{}", k.replace('.', "/"));
            let j = json.pointer(&pointer).unwrap();
            match j.as_f64() {
                Some(x) => {
                    let y: f64 = cell.parse().unwrap();
                    assert!((x - y).abs() <= 1e-12 * x.abs(), "{k}");
                }
                None => assert!(j.is_null() && cell.is_empty(), "{k}"),
            }
        }
    }

    #[test]
    fn linear_only_csv_has_no_lumped_columns() {
        let csv = report(ModelSelector::Linear).emit(ReportFormat::Csv).unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("linear."));
        assert!(!header.contains("lumped"));
        assert!(!header.contains("ratios"));
    }

    #[test]
    fn linear_mode_warns_about_eta() {
        let mut c = Config::example();
        c.lumped = Some(LumpedConfig {
            eta: Some(EtaSetting::Value(0.5)),
            gamma_factor: None,
            oscillation_energy_j: None,
        });
        let v = validate_config(&c).unwrap();
        let r = build_report(&c, &v, ModelSelector::Linear, false).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("lumped.eta"));
        let both = build_report(&c, &v, ModelSelector::Both, false).unwrap();
        assert!(both.warnings.is_empty());
        assert_eq!(both.lumped.unwrap().ion1.eta, 0.5);
    }

    #[test]
    fn unequal_traps_omit_rabi_rate() {
        let mut c = Config::example();
        c.trap2.frequency_hz = 1.1e6;
        let v = validate_config(&c).unwrap();
        let r = build_report(&c, &v, ModelSelector::Both, false).unwrap();
        assert_eq!(r.linear.as_ref().unwrap().g_rad_per_s, None);
        assert!(r.warnings.iter().any(|w| w.contains("t_swap")));
        let csv = r.emit(ReportFormat::Csv).unwrap();
        assert!(csv.contains(",,") || csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn text_is_aligned() {
        let t = report(ModelSelector::Linear).emit(ReportFormat::Text).unwrap();
        let starts: Vec<usize> = t
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with("warning"))
            .map(|l| l.rfind(' ').unwrap())
            .collect();
        assert!(starts.windows(2).all(|w| w[0] == w[1]), "{t}");
    }

    #[test]
    fn timestamp_is_optional() {
        assert!(report(ModelSelector::Lumped).provenance.timestamp_unix_s.is_none());
        assert!(Provenance::new(true).timestamp_unix_s.is_some());
    }
}
