//! Correlated-catalytic thermal operations: the nonequilibrium free energy,
//! the qubit reachability test (free-energy order plus mode inclusion) and
//! the catalytic critical inverse temperature.
//!
//! Entropies are in nats. Comparisons use the scaled free energy
//! `βF = βE − S`, which stays finite at `β = 0`.

use serde::{Deserialize, Serialize};

use crate::geometry::SupportCoefficients;
use crate::search::{first_crossing, golden_section_max};
use crate::thermal::{EnergyFrameState, HamiltonianDirection, ThermalContext};
use crate::witness::{check_beta_max, critical_beta_with, CriticalBetaConfig};
use crate::{Error, Result};

/// Tolerance on the free-energy comparison.
pub const FREE_ENERGY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergy {
    pub value: f64,
    pub beta: f64,
    pub energy: f64,
    pub entropy: f64,
}

/// Von Neumann entropy of a qubit with Bloch radius `r`.
pub fn entropy_of_radius(r: f64) -> f64 {
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    let r = r.clamp(0.0, 1.0);
    -xlogx(0.5 * (1.0 + r)) - xlogx(0.5 * (1.0 - r))
}

/// `⟨H⟩ = (ω/2)(1 − 2p)` with the ground level at `−ω/2`.
pub fn mean_energy(p: f64, gap: f64) -> f64 {
    0.5 * gap * (1.0 - 2.0 * p)
}

fn bloch_radius(state: &EnergyFrameState) -> f64 {
    (2.0 * state.p - 1.0).hypot(state.c)
}

/// `F = E − S/β`; requires `β > 0` (`β = ∞` gives `F = E`).
pub fn free_energy(state: &EnergyFrameState, h: &HamiltonianDirection, beta: f64) -> Result<FreeEnergy> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::NonPositiveBeta(beta));
    }
    let energy = mean_energy(state.p, h.gap());
    let entropy = entropy_of_radius(bloch_radius(state));
    Ok(FreeEnergy { value: energy - entropy / beta, beta, energy, entropy })
}

/// `βF` for axial frame coordinate `z = 2p − 1` and Bloch radius `r`.
fn scaled_free_energy(beta: f64, gap: f64, z: f64, r: f64) -> f64 {
    let energy_term = if beta == 0.0 { 0.0 } else { -0.5 * beta * gap * z };
    energy_term - entropy_of_radius(r)
}

fn scaled_of(state: &EnergyFrameState, beta: f64, gap: f64) -> f64 {
    scaled_free_energy(beta, gap, 2.0 * state.p - 1.0, bloch_radius(state))
}

/// `F_β(target) ≤ F_β(source)` and, if the target carries coherence, so does
/// the source.
pub fn catalytic_reachable(
    source: &EnergyFrameState,
    target: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta: f64,
) -> Result<bool> {
    let fs = free_energy(source, h, beta)?;
    let ft = free_energy(target, h, beta)?;
    let modes_ok = target.c == 0.0 || source.c != 0.0;
    Ok(modes_ok && ft.value <= fs.value + FREE_ENERGY_TOL)
}

/// Target family searched by [`catalytic_critical_beta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalyticTargets {
    /// Energy-diagonal targets only.
    Diagonal,
    /// Every mode-compatible target: diagonal ones, plus coherent ones when
    /// the source is coherent.
    #[default]
    ModeCompatible,
}

const INNER_GRID: usize = 1024;
const INNER_TOL: f64 = 1e-12;

/// Least transverse radius at frame height `z` whose circle leaves the
/// octahedron: `min_s (1 − z h_s)/α_s`, floored at zero.
fn exit_radius(coeffs: &SupportCoefficients, z: f64) -> f64 {
    coeffs
        .iter()
        .filter(|(_, alpha, _)| *alpha > 1e-15)
        .map(|(_, alpha, h)| (1.0 - z * h) / alpha)
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

/// Minimum of `βF` over nonstabiliser targets of the family, or `None` if
/// the family has no nonstabiliser member.
fn min_magic_free_energy(h: &HamiltonianDirection, beta: f64, coherent: bool, coeffs: &SupportCoefficients) -> Option<f64> {
    let gap = h.gap();
    let n1 = h.axis().l1_norm();
    let mut best: Option<f64> = None;
    let mut keep = |v: f64| best = Some(best.map_or(v, |b: f64| b.min(v)));

    // diagonal: |z| ‖n‖₁ ≥ 1; βF is convex in z, so each branch is unimodal
    if n1 > 1.0 + 1e-15 {
        let z0 = 1.0 / n1;
        for (a, b) in [(z0, 1.0), (-1.0, -z0)] {
            let f = |z: f64| -scaled_free_energy(beta, gap, z, z.abs());
            keep(-grid_then_golden(&f, a, b));
        }
    }
    if coherent {
        // physical targets satisfy z² + r² ≤ 1
        let f = |z: f64| {
            let r = exit_radius(coeffs, z);
            let rad = z.hypot(r);
            if rad > 1.0 + 1e-15 {
                f64::NEG_INFINITY
            } else {
                -scaled_free_energy(beta, gap, z, rad.min(1.0))
            }
        };
        let v = grid_then_golden(&f, -1.0, 1.0);
        if v.is_finite() {
            keep(-v);
        }
    }
    best
}

/// Grid maximum refined by golden section on the two cells around it.
fn grid_then_golden<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let x = |i: usize| if i == INNER_GRID { b } else { a + (b - a) * i as f64 / INNER_GRID as f64 };
    let (mut i_best, mut v_best) = (0, f64::NEG_INFINITY);
    for i in 0..=INNER_GRID {
        let v = f(x(i));
        if v > v_best {
            i_best = i;
            v_best = v;
        }
    }
    if !v_best.is_finite() {
        return v_best;
    }
    let lo = x(i_best.saturating_sub(1));
    let hi = x((i_best + 1).min(INNER_GRID));
    v_best.max(golden_section_max(f, lo, hi, INNER_TOL).value)
}

/// Whether some nonstabiliser target of the family is catalytically
/// reachable from `source` at inverse temperature `beta ≥ 0`.
pub fn catalytic_magic_feasible(
    source: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta: f64,
    targets: CatalyticTargets,
) -> bool {
    let coherent = targets == CatalyticTargets::ModeCompatible && source.c != 0.0;
    let coeffs = crate::geometry::support_coefficients(&h.rotation());
    match min_magic_free_energy(h, beta, coherent, &coeffs) {
        Some(f) => f <= scaled_of(source, beta, h.gap()) + FREE_ENERGY_TOL,
        None => false,
    }
}

/// Smallest `β ∈ [0, beta_max]` at which a nonstabiliser target is
/// catalytically reachable: dense scan plus bisection, `None` if never.
pub fn catalytic_critical_beta(
    source: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta_max: f64,
    targets: CatalyticTargets,
) -> Result<Option<f64>> {
    check_beta_max(beta_max)?;
    let cfg = CriticalBetaConfig::default();
    Ok(first_crossing(|b| catalytic_magic_feasible(source, h, b, targets), 0.0, beta_max, cfg.n_scan, cfg.tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalyticReport {
    pub source: EnergyFrameState,
    pub targets: CatalyticTargets,
    pub beta_max: f64,
    pub beta_crt_cat: Option<f64>,
    pub beta_crt: Option<f64>,
    pub entropy_unit: String,
    pub criterion: String,
}

/// Catalytic and thermal-operation thresholds side by side.
pub fn catalytic_report(
    source: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta_max: f64,
    targets: CatalyticTargets,
) -> Result<CatalyticReport> {
    Ok(CatalyticReport {
        source: *source,
        targets,
        beta_max,
        beta_crt_cat: catalytic_critical_beta(source, h, beta_max, targets)?,
        beta_crt: critical_beta_with(source, h, beta_max, &CriticalBetaConfig::default())?,
        entropy_unit: "nats".into(),
        criterion: "free-energy order and mode inclusion".into(),
    })
}

/// `βF` of a thermal-frame state; exposed for comparisons at `β = 0`.
pub fn scaled_free_energy_of(state: &EnergyFrameState, h: &HamiltonianDirection, ctx: &ThermalContext) -> f64 {
    scaled_of(state, ctx.beta(), h.gap())
}
