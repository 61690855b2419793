//! Ion, trap and conductor geometry descriptions shared by all models.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};

/// A trapped ion: mass and charge as an integer multiple of `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonSpecies {
    pub mass_kg: f64,
    pub charge_multiple: u32,
}

impl IonSpecies {
    pub fn new(mass_kg: f64, charge_multiple: u32) -> Result<Self> {
        require_positive("mass_kg", mass_kg)?;
        if charge_multiple == 0 {
            return Err(Error::invalid("charge_multiple", "must be >= 1"));
        }
        Ok(Self {
            mass_kg,
            charge_multiple,
        })
    }

    /// Singly ionised calcium-40.
    pub fn calcium_40() -> Self {
        Self {
            mass_kg: 6.64e-26,
            charge_multiple: 1,
        }
    }

    /// Charge q = n·e in coulombs.
    pub fn charge(&self, constants: &PhysicalConstants) -> f64 {
        f64::from(self.charge_multiple) * constants.elementary_charge
    }
}

/// Harmonic confinement along the axis normal to the pickup disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTrap {
    /// Secular angular frequency ω, rad/s.
    pub angular_frequency: f64,
}

impl HarmonicTrap {
    pub fn new(angular_frequency: f64) -> Result<Self> {
        require_positive("angular_frequency", angular_frequency)?;
        Ok(Self { angular_frequency })
    }

    pub fn from_frequency_hz(frequency_hz: f64) -> Result<Self> {
        require_positive("frequency_hz", frequency_hz)?;
        Ok(Self {
            angular_frequency: 2.0 * PI * frequency_hz,
        })
    }

    pub fn frequency_hz(&self) -> f64 {
        self.angular_frequency / (2.0 * PI)
    }

    /// k = mω².
    pub fn spring_constant(&self, ion: &IonSpecies) -> f64 {
        ion.mass_kg * self.angular_frequency * self.angular_frequency
    }
}

/// Disk–wire–disk coupling conductor and the ion equilibrium heights above
/// each disk. All lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingGeometry {
    pub r1: f64,
    pub r2: f64,
    pub d_eq1: f64,
    pub d_eq2: f64,
    pub wire_length: f64,
    pub wire_radius: f64,
}

impl CouplingGeometry {
    pub fn new(
        r1: f64,
        r2: f64,
        d_eq1: f64,
        d_eq2: f64,
        wire_length: f64,
        wire_radius: f64,
    ) -> Result<Self> {
        let g = Self {
            r1,
            r2,
            d_eq1,
            d_eq2,
            wire_length,
            wire_radius,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("r1", self.r1)?;
        require_positive("r2", self.r2)?;
        require_positive("d_eq1", self.d_eq1)?;
        require_positive("d_eq2", self.d_eq2)?;
        require_positive("wire_length", self.wire_length)?;
        require_positive("wire_radius", self.wire_radius)?;
        Ok(())
    }

    /// The same conductor seen from the other end: disk 2 becomes disk 1.
    pub fn mirrored(&self) -> Self {
        Self {
            r1: self.r2,
            r2: self.r1,
            d_eq1: self.d_eq2,
            d_eq2: self.d_eq1,
            ..*self
        }
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.r1 == self.r2 && self.d_eq1 == self.d_eq2
    }
}
