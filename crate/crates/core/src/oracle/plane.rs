//! Closed-form image-charge results for an infinite grounded plane.

use crate::error::{require_finite, require_positive, Error, Result};

/// Largest allowed finite-difference step, as a fraction of the height.
pub const MAX_RELATIVE_STEP: f64 = 1e-3;

/// Charge induced inside a disk of radius `r` on an infinite grounded plane
/// by a point charge `q` at height `d` above the disk centre:
/// −q·(1 − d/√(d² + r²)). Tends to −q as r → ∞.
pub fn induced_charge_plane_window(q: f64, d: f64, r: f64) -> Result<f64> {
    require_finite("charge", q)?;
    require_positive("height", d)?;
    require_positive("window radius", r)?;
    let s = (d * d + r * r).sqrt();
    // 1 − d/s rewritten as r²/(s(s + d)) to avoid cancellation for r ≪ d.
    Ok(-q * r * r / (s * (s + d)))
}

/// Image-charge surface density on the plane at distance `rho` from the foot
/// of the charge: −q·d / (2π(ρ² + d²)^{3/2}).
pub fn image_surface_density(q: f64, d: f64, rho: f64) -> f64 {
    let s = rho * rho + d * d;
    -q * d / (2.0 * std::f64::consts::PI * s * s.sqrt())
}

/// Central finite difference of the windowed induced charge with respect to
/// the height: |Q(d − δ) − Q(d + δ)| / (2δ).
pub fn a12_numeric(q: f64, d_eq: f64, r: f64, step: f64) -> Result<f64> {
    require_positive("height", d_eq)?;
    require_positive("step", step)?;
    if step > MAX_RELATIVE_STEP * d_eq {
        return Err(Error::invalid(
            "step",
            format!("must be <= {MAX_RELATIVE_STEP} x d_eq ({step} > {})", MAX_RELATIVE_STEP * d_eq),
        ));
    }
    let lo = induced_charge_plane_window(q, d_eq - step, r)?;
    let hi = induced_charge_plane_window(q, d_eq + step, r)?;
    Ok((lo - hi).abs() / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quad::integrate;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const E: f64 = 1.602_176_634e-19;

    #[test]
    fn window_example_matches_quadrature_of_density() {
        let (d, r) = (5e-5, 2.5e-4);
        let q = induced_charge_plane_window(E, d, r).unwrap();
        assert_relative_eq!(q / E, -0.8039, max_relative = 1e-3);
        assert_relative_eq!(q, -1.288e-19, max_relative = 1e-3);
        let quad = integrate(|rho| 2.0 * PI * rho * image_surface_density(E, d, rho), 0.0, r, 1e-13, 200);
        assert_relative_eq!(q, quad.value, max_relative = 1e-12);
    }

    #[test]
    fn window_limits() {
        let d = 1e-4;
        let whole = induced_charge_plane_window(E, d, 1e6 * d).unwrap();
        assert!(((whole + E) / E).abs() < 2e-6);
        let far = induced_charge_plane_window(E, 1e8, 1e-4).unwrap();
        assert!(far.abs() < 1e-40);
    }

    #[test]
    fn window_rejects_bad_input() {
        assert!(induced_charge_plane_window(E, 0.0, 1.0).is_err());
        assert!(induced_charge_plane_window(E, 1.0, 0.0).is_err());
    }

    #[test]
    fn finite_difference_is_second_order() {
        // Error of a central difference shrinks ~4x when the step halves.
        let (d, r) = (5e-5, 5e-5);
        let exact = E * r * r / (r * r + d * d).powf(1.5);
        let e1 = (a12_numeric(E, d, r, 1e-3 * d).unwrap() - exact).abs();
        let e2 = (a12_numeric(E, d, r, 0.5e-3 * d).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn large_plate_asymptote() {
        let d = 5e-5;
        let r = 1e6 * d;
        let v = a12_numeric(E, d, r, 1e-4 * d).unwrap();
        assert_relative_eq!(v, E / r, max_relative = 1e-6);
    }

    #[test]
    fn step_too_large_rejected() {
        assert!(a12_numeric(E, 1.0, 1.0, 2e-3).is_err());
        assert!(a12_numeric(E, 1.0, 1.0, 0.0).is_err());
    }
}
