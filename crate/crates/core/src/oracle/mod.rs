//! Independent first-principles induced-charge calculations used to check
//! the linear-element factors.

pub mod bem;
pub mod plane;
pub mod quad;

pub use bem::{induced_charge_bem, BemMesh, BemSolution};
pub use plane::{a12_numeric, image_surface_density, induced_charge_plane_window};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMethod {
    AnalyticPlane,
    BemDisk,
}

/// Induced charge against source height for one disk radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedChargeCurve {
    /// (height m, induced charge C)
    pub samples: Vec<(f64, f64)>,
    pub source_charge: f64,
    pub window_radius: f64,
    pub method: CurveMethod,
}

impl InducedChargeCurve {
    pub fn compute(
        method: CurveMethod,
        q: f64,
        radius: f64,
        heights: &[f64],
        n_rings: usize,
    ) -> Result<Self> {
        let samples = heights
            .iter()
            .map(|&d| {
                let charge = match method {
                    CurveMethod::AnalyticPlane => induced_charge_plane_window(q, d, radius)?,
                    CurveMethod::BemDisk => induced_charge_bem(q, d, radius, n_rings)?.total_charge,
                };
                Ok((d, charge))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            samples,
            source_charge: q,
            window_radius: radius,
            method,
        })
    }
}

/// One row of the `oracle` CSV comparing the plane window with the disk BEM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub d_m: f64,
    pub r_m: f64,
    pub q_c: f64,
    pub q_analytic_c: f64,
    pub q_bem_c: f64,
    pub rel_diff: f64,
}

pub fn compare(q: f64, d: f64, radius: f64, n_rings: usize) -> Result<OracleRow> {
    let analytic = induced_charge_plane_window(q, d, radius)?;
    let bem = induced_charge_bem(q, d, radius, n_rings)?.total_charge;
    let rel_diff = if analytic == 0.0 { 0.0 } else { (bem - analytic) / analytic };
    Ok(OracleRow {
        d_m: d,
        r_m: radius,
        q_c: q,
        q_analytic_c: analytic,
        q_bem_c: bem,
        rel_diff,
    })
}
