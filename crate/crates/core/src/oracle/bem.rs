//! Axisymmetric boundary-element solver for a finite, zero-thickness,
//! grounded disk with a point charge on its axis.
//!
//! The disk is cut into concentric rings, each carrying a uniform surface
//! density. The potential of every ring is matched to cancel the point
//! charge's potential at one collocation radius per ring (the ring's area
//! centroid), giving a dense linear system. Ring-on-point potentials use the
//! complete elliptic integral kernel integrated adaptively across the ring.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quad::{elliptic_k_complementary, integrate};
use crate::error::{require_finite, require_positive, Error, Result};

pub const MIN_RINGS: usize = 16;
/// Width ratio between neighbouring rings in the rim-graded zone.
pub const GRADING_RATIO: f64 = 1.15;
/// At most this many rings are graded towards the rim.
pub const MAX_GRADED_RINGS: usize = 64;
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
const MAX_SEGMENTS: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BemMesh {
    pub n_rings: usize,
    /// n + 1 radii, strictly increasing from 0 to the disk radius.
    pub edges: Vec<f64>,
    pub collocation: Vec<f64>,
    /// Solved surface density per ring, C/m² (both faces combined).
    pub density: Vec<f64>,
}

impl BemMesh {
    /// Ring edges graded geometrically towards the rim, where the density
    /// has an inverse-square-root edge singularity. The innermost rings are
    /// uniform so the charge peak under the source is resolved too.
    pub fn graded_edges(radius: f64, n_rings: usize) -> Vec<f64> {
        let graded = (n_rings / 4).min(MAX_GRADED_RINGS);
        let core = n_rings - graded;
        let top = GRADING_RATIO.powi(graded as i32);
        // core·h + Σ_{k<graded} w·ratio^k = radius, with h = w·ratio^graded.
        let rim_width = radius / (top * core as f64 + (top - 1.0) / (GRADING_RATIO - 1.0));
        let core_width = rim_width * top;

        let mut widths: Vec<f64> = vec![core_width; core];
        widths.extend((0..graded).rev().map(|k| rim_width * GRADING_RATIO.powi(k as i32)));

        let mut edges = Vec::with_capacity(n_rings + 1);
        edges.push(0.0);
        let mut acc = 0.0;
        for w in &widths {
            acc += w;
            edges.push(acc);
        }
        *edges.last_mut().expect("n_rings > 0") = radius;
        edges
    }

    fn area(&self, j: usize) -> f64 {
        let (a, b) = (self.edges[j], self.edges[j + 1]);
        std::f64::consts::PI * (b * b - a * a)
    }

    pub fn total_charge(&self) -> f64 {
        (0..self.n_rings).map(|j| self.density[j] * self.area(j)).sum()
    }
}

/// Area centroid radius of the annulus [a, b].
fn centroid(a: f64, b: f64) -> f64 {
    2.0 / 3.0 * (b * b * b - a * a * a) / (b * b - a * a)
}

/// 4πε₀ × potential at radius `rho` in the disk plane due to a unit
/// surface density on the annulus [a, b]:
/// ∫ρ'·4K(m)/(ρ + ρ') dρ', m = 4ρρ'/(ρ + ρ')².
fn ring_potential(rho: f64, a: f64, b: f64) -> Result<f64> {
    let kernel = |s: f64| {
        let sum = rho + s;
        if sum == 0.0 {
            return 0.0;
        }
        let k_prime = (rho - s).abs() / sum;
        s * 4.0 * elliptic_k_complementary(k_prime) / sum
    };
    let pieces: &[(f64, f64)] = if rho > a && rho < b {
        &[(a, rho), (rho, b)]
    } else {
        &[(a, b)]
    };
    let mut total = 0.0;
    for &(lo, hi) in pieces {
        let r = integrate(kernel, lo, hi, QUADRATURE_TOLERANCE, MAX_SEGMENTS);
        if !r.converged {
            return Err(Error::Numerical(format!(
                "ring quadrature on [{lo:e}, {hi:e}] at rho = {rho:e} did not reach tolerance (error {:e})",
                r.error
            )));
        }
        total += r.value;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BemSolution {
    pub total_charge: f64,
    pub mesh: BemMesh,
    /// Largest |potential| left at a collocation point, relative to the
    /// source potential at the disk centre.
    pub max_relative_residual: f64,
}

/// Total charge induced on a grounded disk of radius `disk_radius` by a
/// point charge `q` at height `d` on its axis.
pub fn induced_charge_bem(q: f64, d: f64, disk_radius: f64, n_rings: usize) -> Result<BemSolution> {
    require_finite("charge", q)?;
    require_positive("height", d)?;
    require_positive("disk_radius", disk_radius)?;
    if n_rings < MIN_RINGS {
        return Err(Error::invalid("n_rings", format!("must be >= {MIN_RINGS}, got {n_rings}")));
    }

    let edges = BemMesh::graded_edges(disk_radius, n_rings);
    let collocation: Vec<f64> = edges.windows(2).map(|w| centroid(w[0], w[1])).collect();

    let rows: Vec<Vec<f64>> = collocation
        .par_iter()
        .map(|&rho| {
            edges
                .windows(2)
                .map(|w| ring_potential(rho, w[0], w[1]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let matrix = DMatrix::from_fn(n_rings, n_rings, |i, j| rows[i][j]);
    // Point-charge potential (×4πε₀) at each collocation point, to be cancelled.
    let rhs = DVector::from_iterator(n_rings, collocation.iter().map(|&rho| -q / (rho * rho + d * d).sqrt()));

    let lu = matrix.lu();
    let density = lu.solve(&rhs).ok_or_else(|| {
        let u = lu.u();
        let diag: Vec<f64> = (0..n_rings).map(|i| u[(i, i)].abs()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        Error::Numerical(format!(
            "singular collocation matrix ({n_rings} rings, condition estimate {:e})",
            max / min
        ))
    })?;
    if density.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite ring density".into()));
    }

    let scale = if q == 0.0 { 1.0 } else { (q / d).abs() };
    let max_relative_residual = rows
        .iter()
        .zip(rhs.iter())
        .map(|(row, b)| (row.iter().zip(density.iter()).map(|(a, x)| a * x).sum::<f64>() - b).abs())
        .fold(0.0, f64::max)
        / scale;

    let mesh = BemMesh {
        n_rings,
        edges,
        collocation,
        density: density.iter().copied().collect(),
    };
    Ok(BemSolution {
        total_charge: mesh.total_charge(),
        mesh,
        max_relative_residual,
    })
}
