//! The optimal Hamiltonian orientation: which axis `n` pushes the point
//! `m n` furthest from the stabiliser octahedron,
//! `V(m) = max_n min_{‖s‖₁ ≤ 1} ‖m n − s‖₂`.
//!
//! Distances here are raw Bloch-Euclidean, twice the trace-distance
//! convention of [`crate::stabiliser::nonstabiliserness`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{distance_to_l1_ball, UnitVector3};
use crate::stabiliser::{orbit_directions, OrbitId};
use crate::thermal::ThermalContext;
use crate::{Error, Result};

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

/// Directions within this of the sampled maximum count as optimal.
pub const TIE_TOL: f64 = 1e-6;
pub const MIN_DIRECTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    #[serde(rename = "V")]
    pub v: f64,
    pub m: f64,
    /// Optimal axes. When `all_tie` is set every direction is optimal and the
    /// list holds whatever was sampled.
    pub directions: Vec<UnitVector3>,
    pub all_tie: bool,
}

fn check_m(m: f64) -> Result<()> {
    if m >= 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("m must be finite and non-negative, got {m}")))
    }
}

/// `0` for `m ≤ 1/√3`, else `m − 1/√3`.
pub fn v_closed_form(m: f64) -> Result<f64> {
    check_m(m)?;
    Ok(if m <= INV_SQRT3 { 0.0 } else { m - INV_SQRT3 })
}

/// Closed-form optimum: the eight `(±1, ±1, ±1)/√3` axes once `m > 1/√3`.
pub fn extremal_closed_form(m: f64) -> Result<ExtremalResult> {
    let v = v_closed_form(m)?;
    let all_tie = v == 0.0;
    Ok(ExtremalResult { v, m, directions: if all_tie { Vec::new() } else { optimal_hamiltonians() }, all_tie })
}

/// `n_dirs` near-uniform points of the unit sphere on the Fibonacci spiral.
pub fn fibonacci_sphere(n_dirs: usize) -> Vec<UnitVector3> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n_dirs)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n_dirs as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            UnitVector3::normalize(r * phi.cos(), r * phi.sin(), z).expect("nonzero")
        })
        .collect()
}

/// Sampled max–min over a Fibonacci sphere of `n_dirs` directions.
/// Underestimates `V(m)` and converges from below.
pub fn v_brute_force(m: f64, n_dirs: usize) -> Result<ExtremalResult> {
    check_m(m)?;
    if n_dirs < MIN_DIRECTIONS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_DIRECTIONS} directions, got {n_dirs}")));
    }
    Ok(max_min_over(m, &fibonacci_sphere(n_dirs)))
}

/// The max–min restricted to the given directions.
pub fn max_min_over(m: f64, dirs: &[UnitVector3]) -> ExtremalResult {
    let dists: Vec<f64> = dirs.par_iter().map(|n| distance_to_l1_ball(&(n.as_vector() * m))).collect();
    let v = dists.iter().copied().fold(0.0, f64::max);
    let mut directions: Vec<UnitVector3> =
        dirs.iter().zip(&dists).filter(|(_, &d)| d >= v - TIE_TOL).map(|(n, _)| *n).collect();
    directions.sort_by(|a, b| a.to_array().partial_cmp(&b.to_array()).expect("finite"));
    let all_tie = directions.len() == dirs.len();
    ExtremalResult { v, m, directions, all_tie }
}

/// Canonical optimal axis `(1, 1, 1)/√3`, i.e. `H = (X + Y + Z)/√3`.
pub fn optimal_hamiltonian() -> UnitVector3 {
    OrbitId::T.representative()
}

/// All eight optimal axes `(±1, ±1, ±1)/√3`.
pub fn optimal_hamiltonians() -> Vec<UnitVector3> {
    orbit_directions(OrbitId::T)
}

/// Axial extent of the cold end of an incoherent cone, `|1 − 2p e^{−βω}|`.
pub fn thermodynamic_m(p: f64, ctx: &ThermalContext) -> f64 {
    (1.0 - 2.0 * p * ctx.boltzmann_ratio()).abs()
}
