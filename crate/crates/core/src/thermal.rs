//! Reachability under single-qubit thermal operations.
//!
//! Populations move within the thermomajorisation interval
//! `I_β(p) = [min(p, q*), max(p, q*)]` with `q* = 1 − e^{−βω} p`, and the
//! transverse Bloch radius at target population `q` is capped by
//!
//! ```text
//! c_max(q) = |c| √([q(1−γ) − γ(1−p)] [p(1−γ) − γ(1−q)]) / |p − γ|
//! ```
//!
//! The future thermal cone is the solid of revolution about the energy axis
//! bounded by `c_max`.

use std::fmt::Write as _;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::export::fmt_f64;
use crate::geometry::{rotation_to_z, support_coefficients, RotationMatrix, SupportCoefficients, UnitVector3};
use crate::stabiliser::{is_stabiliser, BlochVector};
use crate::tol;
use crate::{Error, Result};

/// Gap of `H = n·σ` (eigenvalues ±1).
pub const DEFAULT_GAP: f64 = 2.0;

/// Energy axis `n` and level spacing `ω` of the qubit Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianDirection {
    axis: UnitVector3,
    gap: f64,
}

impl HamiltonianDirection {
    pub fn new(axis: UnitVector3, gap: f64) -> Result<Self> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::NonPositiveGap(gap));
        }
        Ok(Self { axis, gap })
    }

    /// `H = n·σ`, i.e. gap 2.
    pub fn pauli(axis: UnitVector3) -> Self {
        Self { axis, gap: DEFAULT_GAP }
    }

    pub fn axis(&self) -> &UnitVector3 {
        &self.axis
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// The canonical rotation taking the energy axis to `ẑ`.
    pub fn rotation(&self) -> RotationMatrix {
        rotation_to_z(&self.axis)
    }
}

/// Inverse temperature together with the derived Gibbs ground population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalContext {
    beta: f64,
    gap: f64,
    gamma: f64,
    #[serde(skip)]
    boltzmann: f64,
}

impl ThermalContext {
    /// `β = +∞` is accepted and gives `γ = 1`.
    pub fn new(beta: f64, gap: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::NegativeBeta(beta));
        }
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::NonPositiveGap(gap));
        }
        let boltzmann = (-beta * gap).exp();
        Ok(Self { beta, gap, gamma: 1.0 / (1.0 + boltzmann), boltzmann })
    }

    pub fn for_hamiltonian(beta: f64, h: &HamiltonianDirection) -> Result<Self> {
        Self::new(beta, h.gap())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(1 − γ)/γ = e^{−βω}`.
    pub fn boltzmann_ratio(&self) -> f64 {
        self.boltzmann
    }
}

/// `γ = 1/(1 + e^{−βω})`.
pub fn gibbs_population(beta: f64, gap: f64) -> Result<f64> {
    ThermalContext::new(beta, gap).map(|ctx| ctx.gamma())
}

/// Qubit state in the Hamiltonian eigenframe.
///
/// `c` is the transverse Bloch radius, so the state is physical iff
/// `(2p − 1)² + c² ≤ 1`, i.e. `c ≤ 2√(p(1−p))`. `phase` is the azimuth of the
/// transverse component in the canonical frame of [`rotation_to_z`]; nothing
/// in the thermal analysis depends on it except the input's own stabiliser
/// status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyFrameState {
    pub p: f64,
    pub c: f64,
    #[serde(default)]
    pub phase: f64,
}

impl EnergyFrameState {
    pub fn new(p: f64, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Unphysical(format!("population p = {p} outside [0, 1]")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Unphysical(format!("coherence c = {c} must be non-negative")));
        }
        let bound = Self::max_coherence(p);
        if c > bound + tol::STRUCTURAL {
            return Err(Error::Unphysical(format!(
                "coherence c = {c} exceeds the positivity bound 2√(p(1−p)) = {bound}"
            )));
        }
        Ok(Self { p, c, phase: 0.0 })
    }

    pub fn incoherent(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase.rem_euclid(std::f64::consts::TAU);
        self
    }

    /// Largest transverse Bloch radius compatible with ground population `p`.
    pub fn max_coherence(p: f64) -> f64 {
        2.0 * (p * (1.0 - p)).max(0.0).sqrt()
    }

    pub fn is_incoherent(&self) -> bool {
        self.c == 0.0
    }

    /// Bloch vector in the energy frame, `(c cos φ, c sin φ, 2p − 1)`.
    pub fn frame_bloch(&self) -> Vector3<f64> {
        let (s, co) = self.phase.sin_cos();
        Vector3::new(self.c * co, self.c * s, 2.0 * self.p - 1.0)
    }

    pub fn lab_bloch(&self, h: &HamiltonianDirection) -> BlochVector {
        let v = h.rotation().apply_inverse(&self.frame_bloch());
        // physical by construction; rounding can push the norm a hair over 1
        let norm = v.norm();
        let v = if norm > 1.0 { v / norm } else { v };
        BlochVector::from_vector(v).expect("physical by construction")
    }

    pub fn is_stabiliser(&self, h: &HamiltonianDirection) -> bool {
        is_stabiliser(&self.lab_bloch(h), tol::MEMBERSHIP)
    }
}

/// Closed interval `[lo, hi]` of reachable ground populations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationInterval {
    pub lo: f64,
    pub hi: f64,
}

impl PopulationInterval {
    pub fn contains(&self, q: f64, tol: f64) -> bool {
        q >= self.lo - tol && q <= self.hi + tol
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi == self.lo
    }

    pub fn clamp(&self, q: f64) -> f64 {
        q.clamp(self.lo, self.hi)
    }
}

/// The extreme thermomajorisation population `q* = 1 − e^{−βω} p`.
pub fn extreme_population(p: f64, ctx: &ThermalContext) -> f64 {
    1.0 - ctx.boltzmann_ratio() * p
}

fn is_degenerate(p: f64, ctx: &ThermalContext) -> bool {
    (p - ctx.gamma()).abs() <= tol::DEGENERATE_THERMAL
}

/// `I_β(p)`. Collapses to `{p}` when `|p − γ| ≤ 1e-9`.
pub fn reachable_interval(p: f64, ctx: &ThermalContext) -> PopulationInterval {
    if is_degenerate(p, ctx) {
        return PopulationInterval { lo: p, hi: p };
    }
    let q_star = extreme_population(p, ctx);
    PopulationInterval { lo: p.min(q_star), hi: p.max(q_star) }
}

/// Fast evaluator of `c_max(q)` for a fixed input and bath.
#[derive(Debug, Clone, Copy)]
pub struct CoherenceProfile {
    p: f64,
    abs_c: f64,
    gamma: f64,
    boltzmann: f64,
    q_star: f64,
    scale: f64,
    interval: PopulationInterval,
    degenerate: bool,
}

impl CoherenceProfile {
    pub fn new(p: f64, c: f64, ctx: &ThermalContext) -> Self {
        let degenerate = is_degenerate(p, ctx);
        let gamma = ctx.gamma();
        let scale = if degenerate { 0.0 } else { c.abs() / (p - gamma).abs() };
        Self {
            p,
            abs_c: c.abs(),
            gamma,
            boltzmann: ctx.boltzmann_ratio(),
            q_star: extreme_population(p, ctx),
            scale,
            interval: reachable_interval(p, ctx),
            degenerate,
        }
    }

    pub fn interval(&self) -> PopulationInterval {
        self.interval
    }

    /// `c_max(q)` for `q` already known to lie in the interval (up to
    /// [`tol::INTERVAL`]); `q` is clamped into it first.
    pub fn cap(&self, q: f64) -> f64 {
        if self.degenerate {
            return if (q - self.p).abs() <= tol::INTERVAL { self.abs_c } else { 0.0 };
        }
        if q == self.p {
            return self.abs_c;
        }
        let q = self.interval.clamp(q);
        // the same radicand written so that it vanishes exactly at q = q*
        let b = self.boltzmann;
        let near_p = b * (q - self.p) / (1.0 + b) + (self.p - self.gamma);
        let near_star = (q - self.q_star) / (1.0 + b);
        self.scale * (near_p * near_star).max(0.0).sqrt()
    }
}

/// `c_max(q)`; fails if `q ∉ I_β(p)` beyond [`tol::INTERVAL`].
pub fn coherence_cap(q: f64, p: f64, c: f64, ctx: &ThermalContext) -> Result<f64> {
    let profile = CoherenceProfile::new(p, c, ctx);
    let iv = profile.interval();
    if !iv.contains(q, tol::INTERVAL) {
        return Err(Error::OutsideInterval { q, lo: iv.lo, hi: iv.hi });
    }
    Ok(profile.cap(q))
}

/// The future thermal cone of one input, with its frame precomputed.
#[derive(Debug, Clone, Copy)]
pub struct ThermalCone {
    state: EnergyFrameState,
    hamiltonian: HamiltonianDirection,
    ctx: ThermalContext,
    rotation: RotationMatrix,
    coeffs: SupportCoefficients,
    profile: CoherenceProfile,
}

impl ThermalCone {
    pub fn new(state: &EnergyFrameState, h: &HamiltonianDirection, ctx: &ThermalContext) -> Self {
        let rotation = h.rotation();
        Self {
            state: *state,
            hamiltonian: *h,
            ctx: *ctx,
            rotation,
            coeffs: support_coefficients(&rotation),
            profile: CoherenceProfile::new(state.p, state.c, ctx),
        }
    }

    pub fn state(&self) -> &EnergyFrameState {
        &self.state
    }

    pub fn hamiltonian(&self) -> &HamiltonianDirection {
        &self.hamiltonian
    }

    pub fn context(&self) -> &ThermalContext {
        &self.ctx
    }

    pub fn rotation(&self) -> &RotationMatrix {
        &self.rotation
    }

    pub fn coefficients(&self) -> &SupportCoefficients {
        &self.coeffs
    }

    pub fn interval(&self) -> PopulationInterval {
        self.profile.interval()
    }

    pub fn cap(&self, q: f64) -> f64 {
        self.profile.cap(q)
    }

    /// Lab-frame Bloch vector of the boundary point at population `q` and
    /// frame azimuth `phi`.
    pub fn boundary_point(&self, q: f64, phi: f64) -> Vector3<f64> {
        let r = self.cap(q);
        let (s, c) = phi.sin_cos();
        self.rotation.apply_inverse(&Vector3::new(r * c, r * s, 2.0 * q - 1.0))
    }

    pub fn contains(&self, v: &Vector3<f64>, tol: f64) -> bool {
        let n = self.hamiltonian.axis().as_vector();
        let axial = v.dot(n);
        let q = 0.5 * (1.0 + axial);
        let iv = self.interval();
        if !iv.contains(q, tol) {
            return false;
        }
        let r_perp = (v - n * axial).norm();
        r_perp <= self.cap(iv.clamp(q)) + tol
    }
}

/// Whether `v` lies in the future thermal cone of `state`.
pub fn cone_contains(
    v: &BlochVector,
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    tol: f64,
) -> bool {
    ThermalCone::new(state, h, ctx).contains(v.as_vector(), tol)
}

/// Boundary samples of a thermal cone, stored as parallel columns in
/// q-major order (`n_phi` azimuths per ring).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeMesh {
    pub n_q: usize,
    pub n_phi: usize,
    pub q: Vec<f64>,
    pub phi: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl ConeMesh {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn point(&self, k: usize) -> Vector3<f64> {
        Vector3::new(self.x[k], self.y[k], self.z[k])
    }

    /// `q,phi,x,y,z` with a header row, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,phi,x,y,z\n");
        for k in 0..self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(self.q[k]),
                fmt_f64(self.phi[k]),
                fmt_f64(self.x[k]),
                fmt_f64(self.y[k]),
                fmt_f64(self.z[k])
            );
        }
        out
    }
}

/// Samples the cone boundary on `n_q` evenly spaced populations spanning
/// `I_β(p)` and `n_phi` azimuths in `[0, 2π)`. A degenerate interval gives a
/// single ring.
pub fn cone_mesh(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    n_q: usize,
    n_phi: usize,
) -> Result<ConeMesh> {
    if n_q < 2 || n_phi < 3 {
        return Err(Error::InvalidArgument(format!(
            "cone mesh needs n_q ≥ 2 and n_phi ≥ 3, got {n_q} × {n_phi}"
        )));
    }
    let cone = ThermalCone::new(state, h, ctx);
    let iv = cone.interval();
    let rings = if iv.is_degenerate() { 1 } else { n_q };
    let mut mesh = ConeMesh {
        n_q: rings,
        n_phi,
        q: Vec::with_capacity(rings * n_phi),
        phi: Vec::with_capacity(rings * n_phi),
        x: Vec::with_capacity(rings * n_phi),
        y: Vec::with_capacity(rings * n_phi),
        z: Vec::with_capacity(rings * n_phi),
    };
    for i in 0..rings {
        let q = if rings == 1 {
            iv.lo
        } else if i == rings - 1 {
            iv.hi
        } else {
            iv.lo + iv.length() * i as f64 / (rings - 1) as f64
        };
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * j as f64 / n_phi as f64;
            let v = cone.boundary_point(q, phi);
            mesh.q.push(q);
            mesh.phi.push(phi);
            mesh.x.push(v.x);
            mesh.y.push(v.y);
            mesh.z.push(v.z);
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ctx(beta: f64) -> ThermalContext {
        ThermalContext::new(beta, DEFAULT_GAP).unwrap()
    }

    fn h_axis(x: f64, y: f64, z: f64) -> HamiltonianDirection {
        HamiltonianDirection::pauli(UnitVector3::normalize(x, y, z).unwrap())
    }

    #[test]
    fn gibbs_examples() {
        assert_eq!(gibbs_population(0.0, 2.0).unwrap(), 0.5);
        assert_eq!(gibbs_population(f64::INFINITY, 2.0).unwrap(), 1.0);
        assert!(gibbs_population(50.0, 2.0).unwrap() >= 1.0 - 1e-15);
        assert_abs_diff_eq!(gibbs_population(2f64.ln(), 2.0).unwrap(), 0.8, epsilon = 1e-15);
        assert!(matches!(gibbs_population(-0.1, 2.0), Err(Error::NegativeBeta(_))));
        assert!(matches!(gibbs_population(1.0, 0.0), Err(Error::NonPositiveGap(_))));
    }

    #[test]
    fn interval_examples() {
        let c = ctx(2f64.ln());
        let g = c.gamma();
        let iv = reachable_interval(g, &c);
        assert!(iv.is_degenerate());
        assert_eq!(iv.lo, g);
        let iv = reachable_interval(0.3, &c);
        assert_abs_diff_eq!(iv.lo, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(iv.hi, 0.925, epsilon = 1e-15);
        let iv = reachable_interval(0.3, &ctx(0.0));
        assert_abs_diff_eq!(iv.hi, 0.7, epsilon = 1e-15);
    }

    #[test]
    fn cap_examples() {
        let c = ctx(2f64.ln());
        assert_eq!(coherence_cap(0.3, 0.3, 0.2, &c).unwrap(), 0.2);
        // (0.1 − 0.56)(0.06 − 0.4) = 0.1564 under the root, over |0.3 − 0.8|
        let expected = ((0.5 * 0.2 - 0.8 * 0.7) * (0.3 * 0.2 - 0.8 * 0.5f64)).sqrt() / 0.5;
        assert_abs_diff_eq!(expected, 0.1564f64.sqrt() / 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(coherence_cap(0.5, 0.3, 1.0, &c).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(coherence_cap(0.8, 0.3, 1.0, &c).unwrap(), 0.4, epsilon = 1e-12);
        // the far endpoint retains no coherence
        assert_abs_diff_eq!(coherence_cap(0.925, 0.3, 1.0, &c).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cap_rejects_unreachable_population() {
        let c = ctx(2f64.ln());
        assert!(matches!(coherence_cap(0.95, 0.3, 0.1, &c), Err(Error::OutsideInterval { .. })));
        assert!(matches!(coherence_cap(0.2, 0.3, 0.1, &c), Err(Error::OutsideInterval { .. })));
        assert!(coherence_cap(0.925 + 5e-11, 0.3, 0.1, &c).is_ok());
    }

    #[test]
    fn degenerate_cap_limit() {
        let c = ctx(2f64.ln());
        let g = c.gamma();
        assert_eq!(coherence_cap(g, g, 0.3, &c).unwrap(), 0.3);
        let profile = CoherenceProfile::new(g, 0.3, &c);
        assert_eq!(profile.cap(g + 1e-3), 0.0);
    }

    #[test]
    fn state_validation() {
        assert!(EnergyFrameState::new(0.5, 1.0).is_ok());
        assert!(EnergyFrameState::new(0.5, 1.0 + 1e-9).is_err());
        assert!(EnergyFrameState::new(1.2, 0.0).is_err());
        assert!(EnergyFrameState::new(0.3, -0.1).is_err());
        assert_abs_diff_eq!(EnergyFrameState::max_coherence(0.3), 2.0 * 0.21f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn cone_contains_examples() {
        let h = h_axis(1.0, 1.0, 1.0);
        let c = ctx(1.0);
        let s = EnergyFrameState::new(0.3, 0.2).unwrap();
        let n = *h.axis().as_vector();
        let initial = BlochVector::from_vector(n * (2.0 * s.p - 1.0)).unwrap();
        assert!(cone_contains(&initial, &s, &h, &c, 1e-12));
        let thermal = BlochVector::from_vector(n * (2.0 * c.gamma() - 1.0)).unwrap();
        assert!(cone_contains(&thermal, &s, &h, &c, 1e-12));
        let beyond = BlochVector::from_vector(n * -0.9).unwrap();
        assert!(!cone_contains(&beyond, &s, &h, &c, 1e-12));
    }

    #[test]
    fn incoherent_mesh_is_axis_segment() {
        let h = h_axis(1.0, 0.0, 1.0);
        let mesh = cone_mesh(&EnergyFrameState::incoherent(0.3).unwrap(), &h, &ctx(1.0), 5, 4).unwrap();
        let n = h.axis().as_vector();
        for k in 0..mesh.len() {
            let v = mesh.point(k);
            assert!((v - n * v.dot(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn figure_mesh_points_are_members() {
        let h = h_axis(1.0, 1.0, 0.0);
        let c = ctx(2.0);
        let s = EnergyFrameState::new(0.5, 0.25).unwrap();
        let mesh = cone_mesh(&s, &h, &c, 40, 36).unwrap();
        assert_eq!(mesh.len(), 40 * 36);
        let cone = ThermalCone::new(&s, &h, &c);
        for k in 0..mesh.len() {
            let v = mesh.point(k);
            assert!(v.norm() <= 1.0 + 1e-12);
            assert!(cone.contains(&v, 1e-10));
        }
        // q* endpoint ring collapses onto the axis
        let last = mesh.point(mesh.len() - 1);
        let n = h.axis().as_vector();
        assert!((last - n * last.dot(n)).norm() < 1e-10);
        assert!(reachable_interval(0.5, &c).contains(*mesh.q.last().unwrap(), 0.0));
        // rows are q-major
        assert_eq!(mesh.q[0], mesh.q[35]);
        assert!(mesh.q[36] > mesh.q[0]);
        // midpoints of boundary samples stay inside (convexity spot check)
        for (a, b) in [(0, 700), (13, 1000), (400, 1399)] {
            assert!(cone.contains(&((mesh.point(a) + mesh.point(b)) * 0.5), 1e-10));
        }
    }

    #[test]
    fn degenerate_mesh_is_single_ring() {
        let c = ctx(0.7);
        let s = EnergyFrameState::new(c.gamma(), 0.1).unwrap();
        let mesh = cone_mesh(&s, &h_axis(0.0, 0.0, 1.0), &c, 10, 8).unwrap();
        assert_eq!(mesh.n_q, 1);
        assert_eq!(mesh.len(), 8);
        assert!(cone_mesh(&s, &h_axis(0.0, 0.0, 1.0), &c, 1, 8).is_err());
    }

    #[test]
    fn csv_layout() {
        let c = ctx(1.0);
        let mesh = cone_mesh(&EnergyFrameState::new(0.3, 0.1).unwrap(), &h_axis(0.0, 0.0, 1.0), &c, 2, 3).unwrap();
        let csv = mesh.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "q,phi,x,y,z");
        assert_eq!(lines.len(), 7);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    fn arb_setup() -> impl Strategy<Value = (EnergyFrameState, HamiltonianDirection, ThermalContext)> {
        (0.01..0.99f64, 0.0..1.0f64, 0.0..3.0f64, prop::array::uniform3(-1.0..1.0f64))
            .prop_filter("axis", |(_, _, _, a)| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|(p, cf, beta, a)| {
                let s = EnergyFrameState::new(p, cf * EnergyFrameState::max_coherence(p)).unwrap();
                (s, h_axis(a[0], a[1], a[2]), ctx(beta))
            })
    }

    fn cone_point(cone: &ThermalCone, t: f64, r: f64, phi: f64) -> Vector3<f64> {
        let iv = cone.interval();
        let q = iv.lo + t * iv.length();
        let rad = r * cone.cap(q);
        let (s, c) = phi.sin_cos();
        cone.rotation().apply_inverse(&Vector3::new(rad * c, rad * s, 2.0 * q - 1.0))
    }

    proptest! {
        #[test]
        fn cap_at_initial_population_is_c((s, _h, c) in arb_setup()) {
            prop_assume!((s.p - c.gamma()).abs() > 1e-6);
            prop_assert!((coherence_cap(s.p, s.p, s.c, &c).unwrap() - s.c).abs() <= 1e-12);
        }

        #[test]
        fn cap_nonnegative_on_interval((s, _h, c) in arb_setup(), t in 0.0..=1.0f64) {
            let profile = CoherenceProfile::new(s.p, s.c, &c);
            let iv = profile.interval();
            let q = iv.lo + t * iv.length();
            let g = c.gamma();
            let radicand = (q * (1.0 - g) - g * (1.0 - s.p)) * (s.p * (1.0 - g) - g * (1.0 - q));
            prop_assert!(radicand >= -tol::RADICAND_CLAMP);
            let cap = profile.cap(q);
            prop_assert!(cap >= 0.0 && cap.is_finite());
            // coherence is never amplified
            prop_assert!(cap <= s.c + 1e-12);
        }

        #[test]
        fn gamma_and_interval_grow_with_beta(p in 0.0..0.5f64, b1 in 0.0..5.0f64, db in 0.01..2.0f64) {
            let (lo, hi) = (ctx(b1), ctx(b1 + db));
            prop_assert!(hi.gamma() > lo.gamma());
            prop_assume!(p > 1e-6);
            prop_assert!(reachable_interval(p, &hi).length() > reachable_interval(p, &lo).length());
        }

        #[test]
        fn cone_is_convex((s, h, c) in arb_setup(), a in prop::array::uniform3(0.0..1.0f64), b in prop::array::uniform3(0.0..1.0f64)) {
            let cone = ThermalCone::new(&s, &h, &c);
            let u = cone_point(&cone, a[0], a[1], a[2] * std::f64::consts::TAU);
            let v = cone_point(&cone, b[0], b[1], b[2] * std::f64::consts::TAU);
            prop_assert!(cone.contains(&u, 1e-10));
            prop_assert!(cone.contains(&v, 1e-10));
            prop_assert!(cone.contains(&((u + v) * 0.5), 1e-10));
        }

        #[test]
        fn cone_is_axially_symmetric((s, h, c) in arb_setup(), v in prop::array::uniform3(-0.57..0.57f64), angle in 0.0..6.3f64) {
            let cone = ThermalCone::new(&s, &h, &c);
            let v = Vector3::new(v[0], v[1], v[2]);
            let r = cone.rotation();
            let spun = r.apply_inverse(&RotationMatrix::about_z(angle).apply(&r.apply(&v)));
            // skip points within rounding of the boundary
            let n = h.axis().as_vector();
            let q = 0.5 * (1.0 + v.dot(n));
            let iv = cone.interval();
            prop_assume!((q - iv.lo).abs() > 1e-9 && (q - iv.hi).abs() > 1e-9);
            let margin = (v - n * v.dot(n)).norm() - cone.cap(iv.clamp(q));
            prop_assume!(margin.abs() > 1e-9);
            prop_assert_eq!(cone.contains(&v, 0.0), cone.contains(&spun, 0.0));
        }
    }
}
