//! The magic-generation witness and the thresholds derived from it.
//!
//! For a stabiliser input, thermal operations reach a nonstabiliser state iff
//!
//! ```text
//! M(ρ) = max_{q ∈ I_β(p)} max_s ( c_max(q) α_s + |2q − 1| |h_s| ) > 1,
//! ```
//!
//! the largest ℓ1 norm over the boundary of the future thermal cone.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::{circle_l1_support, circle_l1_support_argmax, SignVector};
use crate::search::{bisect_switch, first_crossing, maximise_on_interval, MaximiserConfig};
use crate::thermal::{EnergyFrameState, HamiltonianDirection, ThermalCone, ThermalContext};
use crate::tol;
use crate::{Error, Result};

/// Which regime produced the witness value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessBranch {
    CoherentGeneral,
    IncoherentLowP,
    IncoherentHighP,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub value: f64,
    /// Maximising target population.
    pub q_star: f64,
    /// Maximising facet normal, oriented so that `(2q* − 1) h_s ≥ 0`.
    pub sign_vector: SignVector,
    pub branch: WitnessBranch,
    pub magic: bool,
    /// False when the input already violates `‖r‖₁ ≤ 1`; the value is still
    /// well defined but no longer certifies generation.
    pub input_stabiliser: bool,
    /// The maximum sits at the initial population (`β`-independent).
    pub easy: bool,
    /// Lab-frame boundary point realising the maximum; its ℓ1 norm is `value`.
    pub extremal_point: [f64; 3],
}

impl WitnessReport {
    pub fn extremal_vector(&self) -> Vector3<f64> {
        Vector3::from(self.extremal_point)
    }
}

/// Evaluates the witness for `state` under `h` at the bath `ctx`.
pub fn witness(state: &EnergyFrameState, h: &HamiltonianDirection, ctx: &ThermalContext) -> WitnessReport {
    witness_with(&ThermalCone::new(state, h, ctx), &MaximiserConfig::default())
}

pub fn witness_with(cone: &ThermalCone, cfg: &MaximiserConfig) -> WitnessReport {
    let coeffs = cone.coefficients();
    let iv = cone.interval();
    let best = maximise_on_interval(
        |q| circle_l1_support(coeffs, cone.cap(q), 2.0 * q - 1.0),
        iv.lo,
        iv.hi,
        &[0.5],
        cfg,
    );
    let q_star = best.x;
    let r_perp = cone.cap(q_star);
    let z = 2.0 * q_star - 1.0;
    let (s, value) = circle_l1_support_argmax(coeffs, r_perp, z);

    let rot = cone.rotation();
    let sv = s.as_vector();
    let phi = (sv.dot(&rot.frame_axis(1))).atan2(sv.dot(&rot.frame_axis(0)));
    let extremal = rot.apply_inverse(&Vector3::new(r_perp * phi.cos(), r_perp * phi.sin(), z));

    let state = cone.state();
    let branch = if !state.is_incoherent() {
        WitnessBranch::CoherentGeneral
    } else if state.p < cone.context().gamma() {
        WitnessBranch::IncoherentLowP
    } else {
        WitnessBranch::IncoherentHighP
    };
    WitnessReport {
        value,
        q_star,
        sign_vector: s,
        branch,
        magic: value > 1.0,
        input_stabiliser: state.is_stabiliser(cone.hamiltonian()),
        easy: (q_star - state.p).abs() <= tol::DEGENERATE_THERMAL,
        extremal_point: [extremal.x, extremal.y, extremal.z],
    }
}

/// Closed form of the witness for an energy-incoherent input:
/// `‖n‖₁ |1 − 2p e^{−βω}|` if `p < γ`, else `‖n‖₁ |2p − 1|`.
pub fn witness_incoherent(p: f64, h: &HamiltonianDirection, ctx: &ThermalContext) -> f64 {
    let n1 = h.axis().l1_norm();
    if p < ctx.gamma() {
        n1 * (1.0 - 2.0 * p * ctx.boltzmann_ratio()).abs()
    } else {
        n1 * (2.0 * p - 1.0).abs()
    }
}

/// Scan density and bisection tolerance for [`critical_beta_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalBetaConfig {
    pub n_scan: usize,
    pub tol: f64,
}

impl Default for CriticalBetaConfig {
    fn default() -> Self {
        Self { n_scan: 2000, tol: 1e-8 }
    }
}

/// Smallest `β ∈ [0, beta_max]` at which the witness exceeds 1.
///
/// The witness need not be monotone in `β` (for `p > ½` the cone first
/// shrinks), so this is the first crossing on a dense scan, refined by
/// bisection. `None` if no scanned `β` generates magic.
pub fn critical_beta(state: &EnergyFrameState, h: &HamiltonianDirection, beta_max: f64) -> Result<Option<f64>> {
    critical_beta_with(state, h, beta_max, &CriticalBetaConfig::default())
}

pub fn critical_beta_with(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta_max: f64,
    cfg: &CriticalBetaConfig,
) -> Result<Option<f64>> {
    check_beta_max(beta_max)?;
    Ok(first_crossing(|beta| witness_at(state, h, beta) > 1.0, 0.0, beta_max, cfg.n_scan, cfg.tol))
}

/// The incoherent threshold `(1/ω) ln(2‖n‖₁ p / (‖n‖₁ − 1))`, floored at 0.
/// `None` when `‖n‖₁ ≤ 1`, where no bath temperature generates magic.
pub fn critical_beta_closed_form(p: f64, h: &HamiltonianDirection) -> Option<f64> {
    let n1 = h.axis().l1_norm();
    if n1 <= 1.0 + tol::STRUCTURAL {
        return None;
    }
    Some(((2.0 * n1 * p / (n1 - 1.0)).ln() / h.gap()).max(0.0))
}

pub(crate) fn check_beta_max(beta_max: f64) -> Result<()> {
    if beta_max > 0.0 && beta_max.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("beta_max must be positive and finite, got {beta_max}")))
    }
}

fn witness_at(state: &EnergyFrameState, h: &HamiltonianDirection, beta: f64) -> f64 {
    let ctx = ThermalContext::new(beta, h.gap()).expect("scan keeps beta non-negative");
    witness(state, h, &ctx).value
}

/// Smallest coherence at which the witness exceeds 1 for ground population
/// `p`: `Some(0.0)` if the incoherent input already suffices, `None` if even
/// the largest physical coherence `2√(p(1−p))` does not.
///
/// The witness is a maximum of functions affine and increasing in `c`, so the
/// crossing is found by bisection.
pub fn critical_coherence(p: f64, h: &HamiltonianDirection, ctx: &ThermalContext) -> Result<Option<f64>> {
    let at = |c: f64| -> Result<f64> { Ok(witness(&EnergyFrameState::new(p, c)?, h, ctx).value) };
    if at(0.0)? > 1.0 {
        return Ok(Some(0.0));
    }
    let c_max = EnergyFrameState::max_coherence(p);
    if at(c_max)? <= 1.0 {
        return Ok(None);
    }
    Ok(Some(bisect_switch(|c| at(c).map(|m| m > 1.0).unwrap_or(false), 0.0, c_max, 1e-13)))
}

/// Minimal depolarising strength that removes all generated magic:
/// `max(0, 1 − 1/M)`.
pub fn robustness(m: f64) -> f64 {
    if m <= 1.0 {
        0.0
    } else {
        (m - 1.0) / m
    }
}

/// `L = −ln(1 − M/‖n‖₁) + ln(1 − 1/‖n‖₁)` for an incoherent input with
/// `p < γ`; equal to `ω (β − β_crt)`. Negative below threshold.
pub fn thermometer(p: f64, h: &HamiltonianDirection, ctx: &ThermalContext) -> Result<f64> {
    let n1 = h.axis().l1_norm();
    if n1 <= 1.0 + tol::STRUCTURAL {
        return Err(Error::InvalidArgument(format!(
            "thermometer needs ‖n‖₁ > 1, got {n1} (Pauli-aligned axis)"
        )));
    }
    if p >= ctx.gamma() {
        return Err(Error::InvalidArgument(format!(
            "thermometer needs p < γ, got p = {p}, γ = {}",
            ctx.gamma()
        )));
    }
    let m = witness_incoherent(p, h, ctx);
    Ok(-(1.0 - m / n1).ln() + (1.0 - 1.0 / n1).ln())
}
