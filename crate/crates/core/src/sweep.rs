//! One-parameter sweeps over a configuration.

use rayon::prelude::*;
use serde_json::Value;

use crate::config::{validate_config, Config};
use crate::error::{Error, Result};
use crate::report::{build_report, cell, ModelSelector, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    R1,
    R2,
    DEq1,
    DEq2,
    WireLength,
    /// Both trap frequencies together.
    Frequency,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 6] = [
        SweepParameter::R1,
        SweepParameter::R2,
        SweepParameter::DEq1,
        SweepParameter::DEq2,
        SweepParameter::WireLength,
        SweepParameter::Frequency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::R1 => "r1_m",
            SweepParameter::R2 => "r2_m",
            SweepParameter::DEq1 => "d_eq1_m",
            SweepParameter::DEq2 => "d_eq2_m",
            SweepParameter::WireLength => "wire_length_m",
            SweepParameter::Frequency => "frequency_hz",
        }
    }

    pub fn apply(self, config: &mut Config, value: f64) {
        let g = &mut config.geometry;
        match self {
            SweepParameter::R1 => g.r1_m = value,
            SweepParameter::R2 => g.r2_m = value,
            SweepParameter::DEq1 => g.d_eq1_m = value,
            SweepParameter::DEq2 => g.d_eq2_m = value,
            SweepParameter::WireLength => g.wire_length_m = value,
            SweepParameter::Frequency => {
                config.trap1.frequency_hz = value;
                config.trap2.frequency_hz = value;
            }
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SweepParameter::ALL.iter().map(|p| p.name()).collect();
                Error::invalid("param", format!("unknown parameter `{s}`; sweepable: {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `steps` points from `from` to `to` inclusive.
pub fn grid(from: f64, to: f64, steps: usize, scale: Scale) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid("steps", format!("must be >= 2, got {steps}")));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::invalid("from/to", "must be finite"));
    }
    let last = (steps - 1) as f64;
    match scale {
        Scale::Linear => Ok((0..steps)
            .map(|i| if i == steps - 1 { to } else { from + (to - from) * i as f64 / last })
            .collect()),
        Scale::Log => {
            if from <= 0.0 || to <= 0.0 {
                return Err(Error::invalid("from/to", "log scale needs positive end points"));
            }
            let (a, b) = (from.ln(), to.ln());
            Ok((0..steps)
                .map(|i| match i {
                    0 => from,
                    _ if i == steps - 1 => to,
                    _ => (a + (b - a) * i as f64 / last).exp(),
                })
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub report: RunReport,
}

/// Evaluates both models at every grid point, in parallel; rows come back in
/// grid order.
pub fn run_sweep(base: &Config, parameter: SweepParameter, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let mut config = base.clone();
            parameter.apply(&mut config, value);
            let v = validate_config(&config)?;
            let report = build_report(&config, &v, ModelSelector::Both, false)?;
            Ok(SweepRow { index, value, report })
        })
        .collect()
}

pub fn sweep_csv(parameter: SweepParameter, rows: &[SweepRow]) -> Result<String> {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cols = row.report.columns()?;
        if i == 0 {
            out.push_str("index,");
            out.push_str(parameter.name());
            for (k, _) in &cols {
                out.push(',');
                out.push_str(k);
            }
            out.push('\n');
        }
        out.push_str(&row.index.to_string());
        out.push(',');
        out.push_str(&cell(&Value::from(row.value)));
        for (_, v) in &cols {
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push('\n');
    }
    Ok(out)
}
