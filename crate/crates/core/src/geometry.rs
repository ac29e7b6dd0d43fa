//! Frame rotations, sign-vector support functions over circles, and the
//! Euclidean projection onto the ℓ1 ball.
//!
//! The stabiliser octahedron is the ℓ1 unit ball, so `‖x‖₁ = max_s sᵀx` over
//! the eight sign vectors `s ∈ {±1}³`. In the frame where the Hamiltonian axis
//! is `ẑ`, a circle of transverse radius `r⊥` at height `z'` therefore has
//! maximal ℓ1 norm `max_s (r⊥ α_s + |z'| |h_s|)` with `α_s`, `h_s` the
//! transverse and axial weights of `s` in that frame.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::tol;
use crate::{Error, Result};

/// A direction in R³ with unit Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct UnitVector3(Vector3<f64>);

impl std::ops::Neg for UnitVector3 {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl UnitVector3 {
    /// Accepts `(x, y, z)` only if it is already unit length within
    /// [`tol::STRUCTURAL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self(v / norm))
    }

    /// Rescales `(x, y, z)` to unit length. Fails on the zero vector.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroDirection);
        }
        Ok(Self(v / norm))
    }

    pub const fn z() -> Self {
        Self(Vector3::new(0.0, 0.0, 1.0))
    }

    /// Direction at longitude `lon` and latitude `lat` (radians).
    pub fn from_lon_lat(lon: f64, lat: f64) -> Self {
        let (sl, cl) = lat.sin_cos();
        let (so, co) = lon.sin_cos();
        Self(Vector3::new(cl * co, cl * so, sl))
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.lp_norm(1)
    }

    /// Angle to `other` in radians.
    pub fn angle_to(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> Self {
        v.to_array()
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

/// A proper rotation `R ∈ SO(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    /// Wraps `m` after checking `mᵀm = 1` and `det m = +1`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let err = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det = m.determinant();
        if err > tol::STRUCTURAL || (det - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidArgument(format!(
                "not a proper rotation (orthogonality error {err:e}, det {det})"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// The inverse rotation `M = Rᵀ`, mapping energy-frame coordinates back
    /// to the lab frame.
    pub fn frame(&self) -> Matrix3<f64> {
        self.0.transpose()
    }

    /// Column `k` of `M = Rᵀ` (`k = 0, 1, 2` for `m₁, m₂, m₃`).
    pub fn frame_axis(&self, k: usize) -> Vector3<f64> {
        self.0.row(k).transpose()
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn apply_inverse(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0.tr_mul(v)
    }

    /// Composes `self · other`.
    pub fn compose(&self, other: &RotationMatrix) -> RotationMatrix {
        Self(self.0 * other.0)
    }

    /// Rotation by `angle` about `ẑ`.
    pub fn about_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }
}

/// Rotation sending `n` to `ẑ`.
///
/// Built as `R_y(−θ) R_z(−φ)` from the polar angle `θ` and azimuth `φ` of `n`.
/// Within [`tol::ANTIPODAL`] of `−ẑ` the half-turn `diag(1, −1, −1)` is used
/// instead, where the azimuth is undefined.
pub fn rotation_to_z(n: &UnitVector3) -> RotationMatrix {
    let v = n.as_vector();
    if (v + Vector3::z()).norm() <= tol::ANTIPODAL {
        return RotationMatrix(Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0)));
    }
    let cos_t = v.z;
    let sin_t = v.x.hypot(v.y);
    let (cos_p, sin_p) = if sin_t > 0.0 {
        (v.x / sin_t, v.y / sin_t)
    } else {
        (1.0, 0.0)
    };
    // R_z(−φ)
    let rz = Matrix3::new(cos_p, sin_p, 0.0, -sin_p, cos_p, 0.0, 0.0, 0.0, 1.0);
    // R_y(−θ)
    let ry = Matrix3::new(cos_t, 0.0, -sin_t, 0.0, 1.0, 0.0, sin_t, 0.0, cos_t);
    RotationMatrix(ry * rz)
}

/// One of the eight vertices of `{±1}³`, indexing a facet of the octahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[i8; 3]", try_from = "[i8; 3]")]
pub struct SignVector([i8; 3]);

impl SignVector {
    pub fn new(s1: i8, s2: i8, s3: i8) -> Result<Self> {
        Self::try_from([s1, s2, s3])
    }

    /// All eight sign vectors in lexicographic order, `(−,−,−)` first.
    pub fn all() -> [SignVector; 8] {
        let mut out = [SignVector([1; 3]); 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let bit = |b: usize| if k >> (2 - b) & 1 == 1 { 1 } else { -1 };
            *slot = SignVector([bit(0), bit(1), bit(2)]);
        }
        out
    }

    /// Position of `self` in [`SignVector::all`].
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0, |acc, &s| (acc << 1) | usize::from(s > 0))
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.0[0].into(), self.0[1].into(), self.0[2].into())
    }

    pub fn components(&self) -> [i8; 3] {
        self.0
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.map(|s| -s))
    }

    pub fn dot(&self, v: &Vector3<f64>) -> f64 {
        self.as_vector().dot(v)
    }
}

impl From<SignVector> for [i8; 3] {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

impl TryFrom<[i8; 3]> for SignVector {
    type Error = Error;

    fn try_from(a: [i8; 3]) -> Result<Self> {
        if a.iter().all(|&s| s == 1 || s == -1) {
            Ok(Self(a))
        } else {
            Err(Error::InvalidArgument(format!("sign vector entries must be ±1, got {a:?}")))
        }
    }
}

/// Transverse and axial weights `(α_s, h_s)` of every sign vector in a
/// rotated frame, indexed as [`SignVector::all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCoefficients {
    alpha: [f64; 8],
    h: [f64; 8],
}

impl SupportCoefficients {
    pub fn alpha(&self, s: SignVector) -> f64 {
        self.alpha[s.index()]
    }

    pub fn h(&self, s: SignVector) -> f64 {
        self.h[s.index()]
    }

    /// `(s, α_s, h_s)` for all eight sign vectors.
    pub fn iter(&self) -> impl Iterator<Item = (SignVector, f64, f64)> + '_ {
        SignVector::all()
            .into_iter()
            .map(move |s| (s, self.alpha[s.index()], self.h[s.index()]))
    }

    /// `max_s |h_s|`, which equals `‖n‖₁` for the frame of `n`.
    pub fn max_abs_h(&self) -> f64 {
        self.h.iter().fold(0.0, |m, h| m.max(h.abs()))
    }
}

/// `α_s = √((sᵀm₁)² + (sᵀm₂)²)` and `h_s = sᵀm₃` for the columns of `Rᵀ`.
pub fn support_coefficients(r: &RotationMatrix) -> SupportCoefficients {
    let (m1, m2, m3) = (r.frame_axis(0), r.frame_axis(1), r.frame_axis(2));
    let mut alpha = [0.0; 8];
    let mut h = [0.0; 8];
    for s in SignVector::all() {
        let k = s.index();
        alpha[k] = s.dot(&m1).hypot(s.dot(&m2));
        h[k] = s.dot(&m3);
    }
    SupportCoefficients { alpha, h }
}

/// Maximum ℓ1 norm over the lab-frame image of the energy-frame circle of
/// transverse radius `r_perp` at height `z_axial`.
pub fn circle_l1_support(coeffs: &SupportCoefficients, r_perp: f64, z_axial: f64) -> f64 {
    circle_l1_support_argmax(coeffs, r_perp, z_axial).1
}

/// As [`circle_l1_support`], also returning the maximising sign vector. Ties
/// resolve to the lowest index, and the returned `s` always has
/// `z_axial · h_s ≥ 0`.
pub fn circle_l1_support_argmax(
    coeffs: &SupportCoefficients,
    r_perp: f64,
    z_axial: f64,
) -> (SignVector, f64) {
    let mut best = (SignVector::all()[0], f64::NEG_INFINITY);
    for (s, alpha, h) in coeffs.iter() {
        let value = r_perp * alpha + z_axial.abs() * h.abs();
        if value > best.1 {
            let oriented = if z_axial * h < 0.0 { s.flipped() } else { s };
            best = (oriented, value);
        }
    }
    best
}

/// Euclidean projection of `v` onto the ℓ1 unit ball `{x : ‖x‖₁ ≤ 1}`.
///
/// Points already inside are returned unchanged. Otherwise `|v|` is projected
/// onto the probability simplex by the sort-and-threshold rule and the signs
/// of `v` are restored.
pub fn project_l1_ball(v: &Vector3<f64>) -> Vector3<f64> {
    let abs = v.abs();
    if abs.sum() <= 1.0 {
        return *v;
    }
    let mut u = [abs.x, abs.y, abs.z];
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumsum += uj;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if uj - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.map(|x| x.signum() * (x.abs() - theta).max(0.0))
}

/// Euclidean distance from `v` to the ℓ1 unit ball.
pub fn distance_to_l1_ball(v: &Vector3<f64>) -> f64 {
    (v - project_l1_ball(v)).norm()
}
