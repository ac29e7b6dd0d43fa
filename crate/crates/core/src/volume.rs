//! Monte-Carlo volumes of the future thermal cone and of its nonstabiliser
//! part, as fractions of the Bloch ball.
//!
//! Points are drawn uniformly in the unit ball by rejection from the cube
//! `[−1, 1)³`. The stream is split into fixed batches; batch `b` draws from
//! ChaCha8 seeded with `seed` on stream `b`, so results depend only on
//! `(seed, n_samples)` and not on the worker count.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::thermal::{EnergyFrameState, HamiltonianDirection, ThermalCone, ThermalContext};
use crate::{Error, Result};

/// Accepted samples per RNG stream.
pub const BATCH: usize = 1 << 16;
pub const MIN_SAMPLES: usize = 1000;
pub const NORMALISATION: &str = "fraction of the Bloch-ball volume 4π/3";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub fraction: f64,
    pub absolute: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub hits: usize,
}

impl VolumeEstimate {
    fn from_hits(hits: usize, n_samples: usize, seed: u64) -> Self {
        let fraction = hits as f64 / n_samples as f64;
        Self {
            fraction,
            absolute: fraction * 4.0 * std::f64::consts::PI / 3.0,
            std_error: (fraction * (1.0 - fraction) / n_samples as f64).sqrt(),
            n_samples,
            seed,
            hits,
        }
    }
}

/// Cone and nonstabiliser-cone estimates drawn from the same samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeVolumes {
    pub cone: VolumeEstimate,
    pub magic: VolumeEstimate,
}

/// Uniform point in the unit ball.
pub fn sample_ball<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm_squared() <= 1.0 {
            return v;
        }
    }
}

/// Estimates both volumes with `n_samples` ball points.
pub fn cone_volumes(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    n_samples: usize,
    seed: u64,
) -> Result<ConeVolumes> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    let cone = ThermalCone::new(state, h, ctx);
    let n_batches = n_samples.div_ceil(BATCH);
    let (cone_hits, magic_hits) = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH.min(n_samples - b * BATCH);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut hits = (0usize, 0usize);
            for _ in 0..len {
                let v = sample_ball(&mut rng);
                if cone.contains(&v, 0.0) {
                    hits.0 += 1;
                    if v.lp_norm(1) > 1.0 {
                        hits.1 += 1;
                    }
                }
            }
            hits
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ConeVolumes {
        cone: VolumeEstimate::from_hits(cone_hits, n_samples, seed),
        magic: VolumeEstimate::from_hits(magic_hits, n_samples, seed),
    })
}

pub fn cone_volume(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    n_samples: usize,
    seed: u64,
) -> Result<VolumeEstimate> {
    Ok(cone_volumes(state, h, ctx, n_samples, seed)?.cone)
}

/// Volume of the reachable states outside the stabiliser octahedron.
pub fn magic_volume(
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    ctx: &ThermalContext,
    n_samples: usize,
    seed: u64,
) -> Result<VolumeEstimate> {
    Ok(cone_volumes(state, h, ctx, n_samples, seed)?.magic)
}
