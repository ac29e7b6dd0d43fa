//! Brute-force counterparts of the closed forms, shipped so that callers can
//! cross-check any computation.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{RotationMatrix, UnitVector3};
use crate::stabiliser::{orbit_directions, OrbitId};
use crate::thermal::{EnergyFrameState, HamiltonianDirection, ThermalCone, ThermalContext};
use crate::{Error, Result};

pub const MIN_GRID: usize = 64;

fn check_grid(n_q: usize, n_phi: usize) -> Result<()> {
    if n_q < MIN_GRID || n_phi < MIN_GRID {
        return Err(Error::InvalidArgument(format!("oracle grids need ≥ {MIN_GRID} points, got {n_q} × {n_phi}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSample {
    pub max_l1: f64,
    pub exceeds: bool,
    pub q: f64,
    pub phi: f64,
}

/// Largest ℓ1 norm on an `n_q × n_phi` grid of cone boundary points.
pub fn cone_sample_witness(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    n_q: usize,
    n_phi: usize,
) -> Result<ConeSample> {
    check_grid(n_q, n_phi)?;
    let cone = ThermalCone::new(state, h, ctx);
    let iv = cone.interval();
    let best = (0..n_q)
        .into_par_iter()
        .map(|a| {
            let q = if a + 1 == n_q { iv.hi } else { iv.lo + iv.length() * a as f64 / (n_q - 1) as f64 };
            let mut best = (f64::NEG_INFINITY, q, 0.0);
            for b in 0..n_phi {
                let phi = std::f64::consts::TAU * b as f64 / n_phi as f64;
                let v = cone.boundary_point(q, phi).lp_norm(1);
                if v > best.0 {
                    best = (v, q, phi);
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, 0.0, 0.0), |x, y| if y.0 > x.0 { y } else { x });
    Ok(ConeSample { max_l1: best.0, exceeds: best.0 > 1.0, q: best.1, phi: best.2 })
}

/// `max_φ ‖Rᵀ (r cos φ, r sin φ, z)‖₁` over `n_phi` equally spaced azimuths.
pub fn azimuth_scan(rotation: &RotationMatrix, r_perp: f64, z: f64, n_phi: usize) -> f64 {
    (0..n_phi)
        .map(|k| {
            let phi = std::f64::consts::TAU * k as f64 / n_phi as f64;
            rotation.apply_inverse(&Vector3::new(r_perp * phi.cos(), r_perp * phi.sin(), z)).lp_norm(1)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// [`azimuth_scan`] followed by golden-section polishing inside the two
/// cells around every sampled local maximum. Removes the `O(Δφ²)` sampling
/// bias so the result can be compared at round-off level.
pub fn azimuth_max(rotation: &RotationMatrix, r_perp: f64, z: f64, n_phi: usize) -> f64 {
    let n = n_phi.max(3);
    let step = std::f64::consts::TAU / n as f64;
    let f = |phi: f64| rotation.apply_inverse(&Vector3::new(r_perp * phi.cos(), r_perp * phi.sin(), z)).lp_norm(1);
    let samples: Vec<f64> = (0..n).map(|k| f(step * k as f64)).collect();
    let mut best = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for k in 0..n {
        let (prev, next) = (samples[(k + n - 1) % n], samples[(k + 1) % n]);
        if samples[k] >= prev && samples[k] >= next {
            let phi = step * k as f64;
            best = best.max(crate::search::golden_section_max(&f, phi - step, phi + step, 1e-13).value);
        }
    }
    best
}

/// Distance from `v` to the ℓ1 ball, as the minimum over a barycentric grid
/// of `k` subdivisions on each octahedron facet, or 0 inside. An upper bound
/// converging to the exact distance.
pub fn l1_ball_distance_by_facets(v: &Vector3<f64>, k: usize) -> f64 {
    if v.lp_norm(1) <= 1.0 {
        return 0.0;
    }
    let k = k.max(1);
    let mut best = f64::INFINITY;
    for s in crate::geometry::SignVector::all() {
        let sv = s.as_vector();
        for i in 0..=k {
            for j in 0..=(k - i) {
                let a = i as f64 / k as f64;
                let b = j as f64 / k as f64;
                let point = Vector3::new(sv.x * a, sv.y * b, sv.z * (1.0 - a - b));
                best = best.min((v - point).norm());
            }
        }
    }
    best
}

/// `max_{u ∈ O} |n·u|` by enumeration.
pub fn orbit_factor_explicit(n: &UnitVector3, o: OrbitId) -> f64 {
    orbit_directions(o).iter().map(|u| n.dot(u).abs()).fold(0.0, f64::max)
}

/// Best fidelity with `u` by dense search over cone boundary points.
pub fn fidelity_by_sampling(
    ctx: &ThermalContext,
    u: &UnitVector3,
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    n_q: usize,
    n_phi: usize,
) -> Result<f64> {
    check_grid(n_q, n_phi)?;
    let cone = ThermalCone::new(state, h, ctx);
    let iv = cone.interval();
    let best = (0..n_q)
        .into_par_iter()
        .map(|a| {
            let q = if a + 1 == n_q { iv.hi } else { iv.lo + iv.length() * a as f64 / (n_q - 1) as f64 };
            (0..n_phi)
                .map(|b| cone.boundary_point(q, std::f64::consts::TAU * b as f64 / n_phi as f64).dot(u.as_vector()))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(0.5 * (1.0 + best))
}

/// One closed-form value next to its oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Two-sided agreement within `tolerance`.
    pub fn close(name: &str, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        let deviation = (closed_form - oracle).abs();
        Self { name: name.into(), closed_form, oracle, deviation, tolerance, pass: deviation <= tolerance }
    }

    /// The oracle approaches from below: `0 ≤ closed − oracle ≤ tolerance`,
    /// with rounding slack on the first inequality.
    pub fn from_below(name: &str, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        let gap = closed_form - oracle;
        Self {
            name: name.into(),
            closed_form,
            oracle,
            deviation: gap.abs(),
            tolerance,
            pass: gap >= -1e-12 && gap <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub max_deviation: f64,
    pub pass: bool,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let max_deviation = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, max_deviation, pass }
    }
}

/// Witness against dense cone sampling and against the azimuth scan at the
/// maximiser.
pub fn verify_witness(state: &EnergyFrameState, h: &HamiltonianDirection, ctx: &ThermalContext) -> Result<VerifyReport> {
    let report = crate::witness::witness(state, h, ctx);
    let sample = cone_sample_witness(state, h, ctx, 2001, 1440)?;
    let cone = ThermalCone::new(state, h, ctx);
    let scan = azimuth_max(cone.rotation(), cone.cap(report.q_star), 2.0 * report.q_star - 1.0, 10_000);
    let mut checks = vec![
        Check::from_below("witness vs cone sampling", report.value, sample.max_l1, 5e-3),
        Check::from_below("circle support vs azimuth scan", report.value, scan, 1e-9),
    ];
    if state.is_incoherent() {
        checks.push(Check::close(
            "witness vs incoherent closed form",
            report.value,
            crate::witness::witness_incoherent(state.p, h, ctx),
            1e-10,
        ));
    }
    Ok(VerifyReport::new(checks))
}
