//! Single-qubit stabiliser polytope, the distance-to-polytope monotone, and
//! the Clifford orbits of the `T` and `H` magic states.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::{distance_to_l1_ball, UnitVector3};
use crate::tol;
use crate::{Error, Result};

/// Bloch vector of a physical qubit state, `‖r‖₂ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm > 1.0 + tol::STRUCTURAL {
            return Err(Error::Unphysical(format!("Bloch vector norm {norm} exceeds 1")));
        }
        Ok(Self(v))
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.lp_norm(1)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        [b.0.x, b.0.y, b.0.z]
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

/// `‖r‖₁ ≤ 1 + tol`.
pub fn is_stabiliser(r: &BlochVector, tol: f64) -> bool {
    r.l1_norm() <= 1.0 + tol
}

/// Euclidean Bloch-space distance to the octahedron, `‖r − P(r)‖₂`.
///
/// This equals the trace norm `‖ρ − σ*‖₁` to the closest stabiliser state.
pub fn bloch_distance_to_polytope(r: &BlochVector) -> f64 {
    distance_to_l1_ball(r.as_vector())
}

/// Minimal trace distance `½‖ρ − σ‖₁` to the stabiliser polytope.
pub fn nonstabiliserness(r: &BlochVector) -> f64 {
    0.5 * bloch_distance_to_polytope(r)
}

/// Clifford orbit of a single-qubit magic state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitId {
    T,
    H,
}

impl OrbitId {
    /// The orbit representative used in most formulas:
    /// `(1,1,1)/√3` for `T` and `(1,0,1)/√2` for `H`.
    pub fn representative(&self) -> UnitVector3 {
        match self {
            OrbitId::T => UnitVector3::normalize(1.0, 1.0, 1.0),
            OrbitId::H => UnitVector3::normalize(1.0, 0.0, 1.0),
        }
        .expect("nonzero representative")
    }
}

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitId::T => "T",
            OrbitId::H => "H",
        })
    }
}

impl FromStr for OrbitId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(OrbitId::T),
            "H" | "h" => Ok(OrbitId::H),
            other => Err(Error::InvalidArgument(format!("unknown orbit {other:?}, expected T or H"))),
        }
    }
}

/// Orbit-optimised fidelities above which magic-state distillation is
/// operational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistillThresholds {
    pub f_thr_t: f64,
    pub f_thr_h: f64,
}

impl Default for DistillThresholds {
    fn default() -> Self {
        Self { f_thr_t: 0.91, f_thr_h: 0.93 }
    }
}

impl DistillThresholds {
    pub fn for_orbit(&self, o: OrbitId) -> f64 {
        match o {
            OrbitId::T => self.f_thr_t,
            OrbitId::H => self.f_thr_h,
        }
    }
}

/// Fidelity at which the depolarised pure state along `a` enters the
/// octahedron: `(2f − 1)‖a‖₁ = 1`.
pub fn stabiliser_fidelity(a: &UnitVector3) -> f64 {
    0.5 * (1.0 + 1.0 / a.l1_norm())
}

/// Bloch directions of the orbit: the eight sign patterns of `(1,1,1)/√3`
/// (`T`), or the twelve signed permutations of `(1,1,0)/√2` (`H`).
pub fn orbit_directions(o: OrbitId) -> Vec<UnitVector3> {
    let signs = [1.0, -1.0];
    let mut out = Vec::new();
    match o {
        OrbitId::T => {
            for sx in signs {
                for sy in signs {
                    for sz in signs {
                        out.push(UnitVector3::normalize(sx, sy, sz).expect("nonzero"));
                    }
                }
            }
        }
        OrbitId::H => {
            // the zero sits in slot `k`
            for k in 0..3 {
                for a in signs {
                    for b in signs {
                        let mut coords = [a, a, a];
                        coords[k] = 0.0;
                        coords[(k + 2) % 3] = b;
                        out.push(UnitVector3::normalize(coords[0], coords[1], coords[2]).expect("nonzero"));
                    }
                }
            }
        }
    }
    out
}

/// `max_{u ∈ O} |n·u|` in closed form: `‖n‖₁/√3` for `T`, and
/// `(|n|₍₁₎ + |n|₍₂₎)/√2` for `H` with the two largest magnitudes of `n`.
pub fn orbit_geometric_factor(n: &UnitVector3, o: OrbitId) -> f64 {
    match o {
        OrbitId::T => n.l1_norm() / 3f64.sqrt(),
        OrbitId::H => {
            let mut a = n.to_array().map(f64::abs);
            a.sort_by(|x, y| y.total_cmp(x));
            (a[0] + a[1]) / 2f64.sqrt()
        }
    }
}
