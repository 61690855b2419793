//! Equivalent-circuit ("lumped element") description of a trapped ion.
//!
//! Two ways of assigning a capacitance and inductance to one ion are kept
//! here for comparison with [`crate::linear`]:
//!
//! * the energy method, C = (ne)²/(2E), L = 1/(ω²C), which ignores any
//!   nearby conductor;
//! * the parallel-plate method built on the induced current i = q·v_z/d,
//!   which yields L = md²/q² and C = q²/(mω²d²).
//!
//! The parallel-plate current holds only for electrodes at a fixed
//! potential. For a floating conductor it is reduced by a factor η ∈ [0, 1],
//! so the capacitance becomes η·C.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_finite, require_positive, Error, Result};

/// Relative tolerance used by [`implied_charge_contradiction`] to decide whether
/// the two values of e² agree.
pub const CONTRADICTION_TOLERANCE: f64 = 1e-6;

/// Lumped-element quantities for one ion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LumpedElements {
    pub c_hyb_a_f: f64,
    pub l_hyb_a_h: f64,
    pub c_hyb_b_f: f64,
    pub l_hyb_b_h: f64,
    pub eta: f64,
    pub c_hyb_b_actual_f: f64,
    pub plate_separation_m: f64,
    pub oscillation_energy_j: f64,
}

/// Inputs for [`lumped_elements`].
#[derive(Debug, Clone, Copy)]
pub struct LumpedInputs {
    pub mass_kg: f64,
    pub angular_frequency: f64,
    pub charge_multiple: u32,
    pub plate_separation_m: f64,
    pub oscillation_energy_j: f64,
    pub eta: f64,
}

/// C_hyb.A = (ne)² / (2E).
pub fn method1_capacitance(energy_j: f64, charge_multiple: u32, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("oscillation energy", energy_j)?;
    if charge_multiple == 0 {
        return Err(Error::invalid("charge_multiple", "must be >= 1"));
    }
    let q = f64::from(charge_multiple) * constants.elementary_charge;
    Ok(q * q / (2.0 * energy_j))
}

/// L_hyb.A = 1/(ω² C_hyb.A).
pub fn method1_inductance(angular_frequency: f64, c_hyb_a: f64) -> Result<f64> {
    require_positive("angular_frequency", angular_frequency)?;
    require_positive("c_hyb_a", c_hyb_a)?;
    Ok(1.0 / (angular_frequency * angular_frequency * c_hyb_a))
}

/// Current induced in two grounded parallel plates a distance `d` apart by a
/// charge moving normal to them: i = q·v_z/d.
pub fn shockley_current(v_z: f64, d: f64, q: f64) -> Result<f64> {
    require_finite("v_z", v_z)?;
    require_finite("charge", q)?;
    require_positive("plate separation", d)?;
    Ok(q * v_z / d)
}

/// Parallel-plate elements `(C_hyb.B, L_hyb.B)` = (q²/(mω²d²), md²/q²).
pub fn method2_elements(mass_kg: f64, angular_frequency: f64, d: f64, q: f64) -> Result<(f64, f64)> {
    require_positive("mass_kg", mass_kg)?;
    require_positive("angular_frequency", angular_frequency)?;
    require_positive("plate separation", d)?;
    require_positive("charge", q)?;
    Ok((
        method2_capacitance(mass_kg, angular_frequency, d, q),
        method2_inductance(mass_kg, d, q),
    ))
}

/// The restoring-force term alone: q²/(mω²d²).
pub fn method2_capacitance(mass_kg: f64, angular_frequency: f64, d: f64, q: f64) -> f64 {
    q * q / (mass_kg * angular_frequency * angular_frequency * d * d)
}

/// The acceleration term alone: md²/q². Has no ω dependence.
pub fn method2_inductance(mass_kg: f64, d: f64, q: f64) -> f64 {
    mass_kg * d * d / (q * q)
}

/// η·C_hyb.B, the capacitance left once the floating conductor's finite
/// self-capacitance reduces the induced current.
pub fn corrected_capacitance(c_hyb_b: f64, eta: f64) -> Result<f64> {
    require_positive("c_hyb_b", c_hyb_b)?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid("eta", format!("must lie in [0, 1], got {eta}")));
    }
    Ok(eta * c_hyb_b)
}

pub fn lumped_elements(inputs: &LumpedInputs, constants: &PhysicalConstants) -> Result<LumpedElements> {
    let q = f64::from(inputs.charge_multiple) * constants.elementary_charge;
    let c_hyb_a = method1_capacitance(inputs.oscillation_energy_j, inputs.charge_multiple, constants)?;
    let l_hyb_a = method1_inductance(inputs.angular_frequency, c_hyb_a)?;
    let (c_hyb_b, l_hyb_b) = method2_elements(
        inputs.mass_kg,
        inputs.angular_frequency,
        inputs.plate_separation_m,
        q,
    )?;
    Ok(LumpedElements {
        c_hyb_a_f: c_hyb_a,
        l_hyb_a_h: l_hyb_a,
        c_hyb_b_f: c_hyb_b,
        l_hyb_b_h: l_hyb_b,
        eta: inputs.eta,
        c_hyb_b_actual_f: corrected_capacitance(c_hyb_b, inputs.eta)?,
        plate_separation_m: inputs.plate_separation_m,
        oscillation_energy_j: inputs.oscillation_energy_j,
    })
}

/// Ground-state energy ħω/2.
pub fn ground_state_energy(angular_frequency: f64, constants: &PhysicalConstants) -> f64 {
    0.5 * constants.reduced_planck * angular_frequency
}

/// Ion–ion coupling of the circuit model in its three customary forms, N/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateCoupling {
    /// mω²√(C₁C₂/((C₁+C)(C₂+C)))
    pub exact_n_per_m: f64,
    /// mω²√(C₁C₂)/C, valid for C ≫ C₁, C₂.
    pub large_c_n_per_m: f64,
    /// Γ²q₁q₂/(d₁d₂C); reduces to Γ²q²/(d²C) for identical ions.
    pub geometric_n_per_m: f64,
}

fn check_caps(c1: f64, c2: f64, c_total: f64) -> Result<()> {
    require_positive("c1_hyb", c1)?;
    require_positive("c2_hyb", c2)?;
    require_positive("c_total", c_total)?;
    Ok(())
}

pub fn gamma_parallel_plate_exact(mass_kg: f64, angular_frequency: f64, c1: f64, c2: f64, c_total: f64) -> Result<f64> {
    check_caps(c1, c2, c_total)?;
    require_positive("mass_kg", mass_kg)?;
    require_positive("angular_frequency", angular_frequency)?;
    let k = mass_kg * angular_frequency * angular_frequency;
    Ok(k * (c1 / (c1 + c_total) * (c2 / (c2 + c_total))).sqrt())
}

pub fn gamma_parallel_plate_large_c(mass_kg: f64, angular_frequency: f64, c1: f64, c2: f64, c_total: f64) -> Result<f64> {
    check_caps(c1, c2, c_total)?;
    require_positive("mass_kg", mass_kg)?;
    require_positive("angular_frequency", angular_frequency)?;
    let k = mass_kg * angular_frequency * angular_frequency;
    Ok(k * (c1 * c2).sqrt() / c_total)
}

pub fn gamma_parallel_plate_geometric(
    gamma_factor: f64,
    q1: f64,
    q2: f64,
    d1: f64,
    d2: f64,
    c_total: f64,
) -> Result<f64> {
    require_positive("gamma_factor", gamma_factor)?;
    require_positive("q1", q1)?;
    require_positive("q2", q2)?;
    require_positive("d1", d1)?;
    require_positive("d2", d2)?;
    require_positive("c_total", c_total)?;
    Ok(gamma_factor * gamma_factor * q1 * q2 / (d1 * d2 * c_total))
}

/// Inputs for [`gamma_parallel_plate`].
#[derive(Debug, Clone, Copy)]
pub struct PlateCouplingInputs {
    pub mass_kg: f64,
    pub angular_frequency: f64,
    pub c1_hyb: f64,
    pub c2_hyb: f64,
    pub c_total: f64,
    /// Geometric factor Γ, 1 for ideal parallel plates.
    pub gamma_factor: f64,
    pub q1: f64,
    pub q2: f64,
    pub d1: f64,
    pub d2: f64,
}

/// All three forms. They coincide when C ≫ C₁, C₂ and C_i = q_i²/(mω²d_i²).
pub fn gamma_parallel_plate(p: &PlateCouplingInputs) -> Result<PlateCoupling> {
    Ok(PlateCoupling {
        exact_n_per_m: gamma_parallel_plate_exact(p.mass_kg, p.angular_frequency, p.c1_hyb, p.c2_hyb, p.c_total)?,
        large_c_n_per_m: gamma_parallel_plate_large_c(p.mass_kg, p.angular_frequency, p.c1_hyb, p.c2_hyb, p.c_total)?,
        geometric_n_per_m: gamma_parallel_plate_geometric(p.gamma_factor, p.q1, p.q2, p.d1, p.d2, p.c_total)?,
    })
}

/// Result of equating the current needed to move an ion with a uniformly
/// charged plate pair (area A) to the induced parallel-plate current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContradictionCheck {
    /// 2ε₀Amω²d, the value of e² the equality would imply, C².
    pub implied_e_squared: f64,
    pub actual_e_squared: f64,
    pub equal: bool,
}

pub fn implied_charge_contradiction(
    mass_kg: f64,
    angular_frequency: f64,
    area_m2: f64,
    d: f64,
    constants: &PhysicalConstants,
) -> Result<ContradictionCheck> {
    require_positive("mass_kg", mass_kg)?;
    require_positive("angular_frequency", angular_frequency)?;
    require_positive("area", area_m2)?;
    require_positive("plate separation", d)?;
    let implied = 2.0 * constants.vacuum_permittivity * area_m2 * mass_kg * angular_frequency * angular_frequency * d;
    let actual = constants.elementary_charge * constants.elementary_charge;
    Ok(ContradictionCheck {
        implied_e_squared: implied,
        actual_e_squared: actual,
        equal: ((implied - actual) / actual).abs() <= CONTRADICTION_TOLERANCE,
    })
}
