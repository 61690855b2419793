//! Self-capacitance estimates for the floating coupling conductor.
//!
//! The conductor is treated as three isolated pieces whose self-capacitances
//! add. Mutual (proximity) capacitance between the disks and the wire is
//! neglected, and disks are ideal zero-thickness conductors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};
use crate::types::CouplingGeometry;

/// Self-capacitances of the pieces of the coupling conductor, in farads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfCapacitances {
    pub c_disk1: f64,
    pub c_wire: f64,
    pub c_disk2: f64,
    pub total: f64,
}

impl SelfCapacitances {
    pub fn new(c_disk1: f64, c_wire: f64, c_disk2: f64) -> Result<Self> {
        for (name, v) in [("c_disk1", c_disk1), ("c_wire", c_wire), ("c_disk2", c_disk2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self {
            c_disk1,
            c_wire,
            c_disk2,
            total: c_disk1 + c_wire + c_disk2,
        })
    }

    /// Swap the roles of the two disks.
    pub fn mirrored(&self) -> Self {
        Self {
            c_disk1: self.c_disk2,
            c_disk2: self.c_disk1,
            ..*self
        }
    }
}

/// Isolated thin disk: C = 8ε₀r.
pub fn disk_self_capacitance(radius: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("disk radius", radius)?;
    Ok(8.0 * constants.vacuum_permittivity * radius)
}

/// Isolated thin straight wire: C = 2πε₀L / ln(L/a).
///
/// Intended for L/a > e; shorter ratios still return a value but the
/// estimate is poor there.
pub fn wire_self_capacitance(length: f64, radius: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("wire_length", length)?;
    require_positive("wire_radius", radius)?;
    if length <= radius {
        return Err(Error::invalid(
            "wire_length",
            format!("must exceed wire_radius ({length} <= {radius})"),
        ));
    }
    Ok(2.0 * PI * constants.vacuum_permittivity * length / (length / radius).ln())
}

/// Strategy seam for self-capacitance estimates.
pub trait SelfCapacitanceModel: Send + Sync {
    fn disk(&self, radius: f64, constants: &PhysicalConstants) -> Result<f64>;
    fn wire(&self, length: f64, radius: f64, constants: &PhysicalConstants) -> Result<f64>;

    fn self_capacitances(
        &self,
        geometry: &CouplingGeometry,
        constants: &PhysicalConstants,
    ) -> Result<SelfCapacitances> {
        SelfCapacitances::new(
            self.disk(geometry.r1, constants)?,
            self.wire(geometry.wire_length, geometry.wire_radius, constants)?,
            self.disk(geometry.r2, constants)?,
        )
    }
}

/// Default estimator: each piece as an isolated conductor.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsolatedConductors;

impl SelfCapacitanceModel for IsolatedConductors {
    fn disk(&self, radius: f64, constants: &PhysicalConstants) -> Result<f64> {
        disk_self_capacitance(radius, constants)
    }

    fn wire(&self, length: f64, radius: f64, constants: &PhysicalConstants) -> Result<f64> {
        wire_self_capacitance(length, radius, constants)
    }
}
