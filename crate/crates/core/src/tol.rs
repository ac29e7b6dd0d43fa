//! Named numerical tolerances shared by every module.

/// Unit norms, orthogonality and determinants.
pub const STRUCTURAL: f64 = 1e-12;
/// Algebraic identities that go through a square root or a division.
pub const DERIVED: f64 = 1e-10;
/// Agreement between a closed form and a brute-force scan.
pub const ORACLE: f64 = 1e-9;
/// Stabiliser membership slack on `‖r‖₁ ≤ 1`.
pub const MEMBERSHIP: f64 = 1e-12;
/// `|p − γ|` below which the input is treated as already thermal.
pub const DEGENERATE_THERMAL: f64 = 1e-9;
/// Slack on `q ∈ I_β(p)`.
pub const INTERVAL: f64 = 1e-10;
/// Negative radicands above `-RADICAND_CLAMP` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;
/// Distance from `-ẑ` below which the fixed half-turn about `x̂` is used.
pub const ANTIPODAL: f64 = 1e-9;
