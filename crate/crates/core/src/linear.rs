//! The linear-element description of ion–ion coupling through a floating
//! conductor.
//!
//! The coupling is split into three independent linear responses:
//!
//! 1. `a12`: ion 1 displacement → charge induced on disk 1 were it grounded (C/m)
//! 2. `zeta`: that charge → charge arriving on disk 2 of the floating conductor (1)
//! 3. `a34`: charge on disk 2 → axial force on ion 2 (N/C)
//!
//! Their product γ (N/m) is the coefficient of the coupling energy
//! γ·Δx₁·Δx₂ and does not depend on ion mass or trap frequency. The rate at
//! which equal-frequency ions swap motional quanta is g = γ/(2mω).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::capacitance::SelfCapacitances;
use crate::config::ValidatedConfig;
use crate::constants::PhysicalConstants;
use crate::error::{require_finite, require_positive, Error, Result};

/// Displacements beyond this fraction of `d_eq1` are flagged as outside the
/// first-order (linear response) regime.
pub const LINEARITY_THRESHOLD: f64 = 0.1;

/// Relative tolerance for treating two trap frequencies (or masses) as equal.
const EQUALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearElements {
    pub a12_c_per_m: f64,
    pub zeta: f64,
    pub a34_n_per_c: f64,
    pub gamma_n_per_m: f64,
    pub g_rad_per_s: f64,
    pub t_swap_s: f64,
}

/// Charge induced on the near disk and on the far disk for one displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedChargeResponse {
    pub z_m: f64,
    /// a12·z.
    pub q_temp_c: f64,
    /// ζ·q_temp.
    pub q_c_c: f64,
    /// Signed change of the charge on a grounded disk 1 when ion 1 moves a
    /// distance z towards it: −a12·z, opposite in sign to q1.
    pub induced_imbalance_c: f64,
    /// |z| exceeded [`LINEARITY_THRESHOLD`]·d_eq1.
    pub beyond_linear_regime: bool,
}

/// Ion displacement → charge induced on a grounded disk of radius `r1`:
/// q₁r₁²/(r₁² + d²)^{3/2}.
pub fn a12(q1: f64, r1: f64, d_eq1: f64) -> Result<f64> {
    require_finite("q1", q1)?;
    require_positive("r1", r1)?;
    require_positive("d_eq1", d_eq1)?;
    let s = r1 * r1 + d_eq1 * d_eq1;
    Ok(q1 * r1 * r1 / (s * s.sqrt()))
}

/// Charge on disk 2 → force on ion 2:
/// q₂d/(4πε₀(d² + r₂²)^{3/2}).
pub fn a34(q2: f64, r2: f64, d_eq2: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_finite("q2", q2)?;
    require_positive("r2", r2)?;
    require_positive("d_eq2", d_eq2)?;
    Ok(q2 * ring_axial_field_per_charge(r2, d_eq2, constants))
}

/// Axial field of a uniformly charged ring of radius `r2` at height `d_eq2`
/// on its axis, carrying total charge `q_c`.
pub fn ring_field(q_c: f64, r2: f64, d_eq2: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_finite("q_c", q_c)?;
    require_positive("r2", r2)?;
    require_positive("d_eq2", d_eq2)?;
    Ok(q_c * ring_axial_field_per_charge(r2, d_eq2, constants))
}

fn ring_axial_field_per_charge(r: f64, d: f64, constants: &PhysicalConstants) -> f64 {
    let s = d * d + r * r;
    constants.coulomb() * d / (s * s.sqrt())
}

/// Strategy for the fraction ζ of grounded-case charge that reaches the far
/// disk of the floating conductor.
pub trait ChargeSharing: Send + Sync {
    fn zeta(&self, capacitances: &SelfCapacitances) -> Result<f64>;
}

/// ζ = C_disk2 / (C_disk1 + C_wire + C_disk2): charge entering the floating
/// conductor distributes in proportion to self-capacitance.
#[derive(Debug, Clone, Copy, Default)]
pub struct CapacitanceRatio;

impl ChargeSharing for CapacitanceRatio {
    fn zeta(&self, c: &SelfCapacitances) -> Result<f64> {
        zeta(c)
    }
}

pub fn zeta(c: &SelfCapacitances) -> Result<f64> {
    for (name, v) in [("c_disk1", c.c_disk1), ("c_wire", c.c_wire), ("c_disk2", c.c_disk2)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
        }
    }
    let total = c.c_disk1 + c.c_wire + c.c_disk2;
    if total <= 0.0 {
        return Err(Error::invalid("total capacitance", "must be > 0"));
    }
    Ok(c.c_disk2 / total)
}

/// γ = a12 · ζ · a34.
pub fn gamma(a12: f64, zeta: f64, a34: f64) -> f64 {
    a12 * zeta * a34
}

/// γ written out as one expression in the geometry. Used to cross-check the
/// three-factor product.
#[allow(clippy::too_many_arguments)]
pub fn gamma_expanded(
    q1: f64,
    r1: f64,
    d_eq1: f64,
    zeta: f64,
    q2: f64,
    r2: f64,
    d_eq2: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let s1 = r1 * r1 + d_eq1 * d_eq1;
    let s2 = d_eq2 * d_eq2 + r2 * r2;
    (q1 * r1 * r1 / s1.powf(1.5)) * zeta * (q2 * d_eq2 / (4.0 * PI * constants.vacuum_permittivity * s2.powf(1.5)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiCoupling {
    pub g_rad_per_s: f64,
    /// π/(2g); infinite when γ = 0.
    pub t_swap_s: f64,
}

/// g = γ/(2mω) and the swap time π/(2g).
pub fn rabi_coupling(gamma: f64, mass_kg: f64, angular_frequency: f64) -> Result<RabiCoupling> {
    require_finite("gamma", gamma)?;
    require_positive("mass_kg", mass_kg)?;
    require_positive("angular_frequency", angular_frequency)?;
    let g = gamma / (2.0 * mass_kg * angular_frequency);
    Ok(RabiCoupling {
        g_rad_per_s: g,
        t_swap_s: PI / (2.0 * g.abs()),
    })
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUALITY_TOLERANCE * a.abs().max(b.abs())
}

/// Rabi coupling for a configuration. The conversion assumes both traps
/// share one frequency and both ions one mass; anything else is rejected.
pub fn rabi_coupling_for(config: &ValidatedConfig, gamma: f64) -> Result<RabiCoupling> {
    let (w1, w2) = (config.trap1.angular_frequency, config.trap2.angular_frequency);
    if !nearly_equal(w1, w2) {
        return Err(Error::Unsupported(format!(
            "g = gamma/(2 m omega) needs equal trap frequencies (trap1 {} Hz, trap2 {} Hz)",
            config.trap1.frequency_hz(),
            config.trap2.frequency_hz()
        )));
    }
    let (m1, m2) = (config.ion1.mass_kg, config.ion2.mass_kg);
    if !nearly_equal(m1, m2) {
        return Err(Error::Unsupported(format!(
            "g = gamma/(2 m omega) needs equal ion masses (ion1 {m1} kg, ion2 {m2} kg)"
        )));
    }
    rabi_coupling(gamma, m1, w1)
}

/// The three factors and γ for coupling in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingFactors {
    pub a12: f64,
    pub zeta: f64,
    pub a34: f64,
    pub gamma: f64,
}

/// Factors for ion 1 driving ion 2.
pub fn coupling_factors(config: &ValidatedConfig, sharing: &dyn ChargeSharing) -> Result<CouplingFactors> {
    let g = &config.geometry;
    let a12 = a12(config.q1(), g.r1, g.d_eq1)?;
    let zeta = sharing.zeta(&config.capacitances)?;
    let a34 = a34(config.q2(), g.r2, g.d_eq2, &config.constants)?;
    Ok(CouplingFactors {
        a12,
        zeta,
        a34,
        gamma: gamma(a12, zeta, a34),
    })
}

/// Factors for ion 2 driving ion 1: the conductor read from the other end.
/// Differs from [`coupling_factors`] only for asymmetric setups.
pub fn reverse_coupling_factors(config: &ValidatedConfig, sharing: &dyn ChargeSharing) -> Result<CouplingFactors> {
    let g = config.geometry.mirrored();
    let a12 = a12(config.q2(), g.r1, g.d_eq1)?;
    let zeta = sharing.zeta(&config.capacitances.mirrored())?;
    let a34 = a34(config.q1(), g.r2, g.d_eq2, &config.constants)?;
    Ok(CouplingFactors {
        a12,
        zeta,
        a34,
        gamma: gamma(a12, zeta, a34),
    })
}

pub fn linear_elements(config: &ValidatedConfig) -> Result<LinearElements> {
    linear_elements_with(config, &CapacitanceRatio)
}

pub fn linear_elements_with(config: &ValidatedConfig, sharing: &dyn ChargeSharing) -> Result<LinearElements> {
    let f = coupling_factors(config, sharing)?;
    let rabi = rabi_coupling_for(config, f.gamma)?;
    Ok(LinearElements {
        a12_c_per_m: f.a12,
        zeta: f.zeta,
        a34_n_per_c: f.a34,
        gamma_n_per_m: f.gamma,
        g_rad_per_s: rabi.g_rad_per_s,
        t_swap_s: rabi.t_swap_s,
    })
}

/// Charges produced by displacing ion 1 by `z` towards disk 1.
pub fn induced_charge_response(config: &ValidatedConfig, z: f64) -> Result<InducedChargeResponse> {
    require_finite("z", z)?;
    let g = &config.geometry;
    let a12 = a12(config.q1(), g.r1, g.d_eq1)?;
    let zeta = CapacitanceRatio.zeta(&config.capacitances)?;
    let q_temp = a12 * z;
    let beyond = z.abs() > LINEARITY_THRESHOLD * g.d_eq1;
    if beyond {
        log::warn!(
            "displacement {z} m exceeds {LINEARITY_THRESHOLD} x d_eq1; linear response is only first order in z"
        );
    }
    Ok(InducedChargeResponse {
        z_m: z,
        q_temp_c: q_temp,
        q_c_c: zeta * q_temp,
        induced_imbalance_c: -q_temp,
        beyond_linear_regime: beyond,
    })
}
