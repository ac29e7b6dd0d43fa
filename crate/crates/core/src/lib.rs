//! Nonstabiliserness ("magic") generation from stabiliser qubit states under
//! thermal operations.
//!
//! The crate answers four related questions for a single qubit with
//! Hamiltonian `H = n·σ` coupled to a bath at inverse temperature `β`:
//!
//! * does the future thermal cone leave the stabiliser octahedron
//!   ([`witness`]), and at which `β` or coherence does it start to
//!   ([`witness::critical_beta`], [`witness::critical_coherence`]);
//! * how close can the reachable states get to the `T`/`H` magic-state
//!   orbits, and how cold must the bath be for distillation ([`distill`]);
//! * how much of the Bloch ball becomes reachable magic ([`volume`]);
//! * which Hamiltonian orientation is optimal ([`extremal`]), and how much a
//!   correlated catalyst lowers the thresholds ([`catalytic`]).
//!
//! Every closed form has an independent brute-force counterpart in
//! [`oracle`].

pub mod catalytic;
pub mod distill;
mod error;
pub mod export;
pub mod extremal;
pub mod geometry;
pub mod oracle;
pub mod search;
pub mod stabiliser;
pub mod thermal;
pub mod tol;
pub mod volume;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{RotationMatrix, SignVector, SupportCoefficients, UnitVector3};
pub use stabiliser::{BlochVector, DistillThresholds, OrbitId};
pub use thermal::{EnergyFrameState, HamiltonianDirection, PopulationInterval, ThermalContext};
pub use witness::{WitnessBranch, WitnessReport};
