//! Physical constants (CODATA 2018, SI).

use std::f64::consts::PI;

/// Fundamental constants used by every model. The exact SI values are
/// exposed through [`PhysicalConstants::CODATA`]; the struct exists so
/// callers pass one explicit set around rather than reaching for globals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge, C.
    pub elementary_charge: f64,
    /// Vacuum permittivity, F/m.
    pub vacuum_permittivity: f64,
    /// Reduced Planck constant, J·s.
    pub reduced_planck: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        elementary_charge: 1.602_176_634e-19,
        vacuum_permittivity: 8.854_187_812_8e-12,
        reduced_planck: 1.054_571_817e-34,
    };

    /// Coulomb constant 1/(4πε₀), N·m²/C².
    pub fn coulomb(&self) -> f64 {
        1.0 / (4.0 * PI * self.vacuum_permittivity)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}
