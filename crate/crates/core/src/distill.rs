//! Fidelities reachable with the `T`/`H` Clifford orbits, the inverse
//! temperature at which they cross the distillation thresholds, and the
//! orientation landscape of that temperature.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::export::{fmt_f64, fmt_opt};
use crate::geometry::UnitVector3;
use crate::search::{bisect_switch, maximise_on_interval, MaximiserConfig};
use crate::stabiliser::{orbit_directions, DistillThresholds, OrbitId};
use crate::thermal::{CoherenceProfile, EnergyFrameState, HamiltonianDirection, ThermalContext};
use crate::witness::check_beta_max;
use crate::Result;

/// Best fidelity with the pure state along `u` over the future thermal cone,
/// `½[1 + max_q (c_max(q) u⊥ + (2q − 1) n·u)]`.
///
/// The axial term carries the sign of `n·u`; over an orbit closed under
/// `u → −u` the maximum becomes `|2q − 1| |n·u|`.
pub fn best_fidelity(ctx: &ThermalContext, u: &UnitVector3, state: &EnergyFrameState, h: &HamiltonianDirection) -> f64 {
    let w = h.axis().dot(u).clamp(-1.0, 1.0);
    let u_perp = (1.0 - w * w).max(0.0).sqrt();
    let profile = CoherenceProfile::new(state.p, state.c, ctx);
    maximise_fidelity(&profile, |q| profile.cap(q) * u_perp + (2.0 * q - 1.0) * w)
}

/// `½[1 + max_q (c_max(q) u⊥ + |2q − 1| u_z)]` for the antipodal pair with
/// overlap `u_z = |n·u|`.
fn pair_fidelity(profile: &CoherenceProfile, u_z: f64) -> f64 {
    let u_perp = (1.0 - u_z * u_z).max(0.0).sqrt();
    maximise_fidelity(profile, |q| profile.cap(q) * u_perp + (2.0 * q - 1.0).abs() * u_z)
}

fn maximise_fidelity<F: Fn(f64) -> f64>(profile: &CoherenceProfile, objective: F) -> f64 {
    let iv = profile.interval();
    let best = maximise_on_interval(objective, iv.lo, iv.hi, &[0.5], &MaximiserConfig::default());
    0.5 * (1.0 + best.value)
}

/// Distinct overlaps `|n·u|` over the orbit (antipodal pairs coincide).
fn orbit_overlaps(o: OrbitId, h: &HamiltonianDirection) -> Vec<f64> {
    let mut zs: Vec<f64> = orbit_directions(o).iter().map(|u| h.axis().dot(u).abs().min(1.0)).collect();
    zs.sort_by(f64::total_cmp);
    zs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    zs
}

/// `max_{u ∈ O} F*(β, u)`.
pub fn orbit_fidelity(ctx: &ThermalContext, o: OrbitId, state: &EnergyFrameState, h: &HamiltonianDirection) -> f64 {
    orbit_fidelity_from(&orbit_overlaps(o, h), state, ctx)
}

fn orbit_fidelity_from(overlaps: &[f64], state: &EnergyFrameState, ctx: &ThermalContext) -> f64 {
    let profile = CoherenceProfile::new(state.p, state.c, ctx);
    overlaps.iter().map(|&z| pair_fidelity(&profile, z)).fold(f64::NEG_INFINITY, f64::max)
}

/// Bisection tolerance on `β` for [`beta_dist`].
pub const BETA_DIST_TOL: f64 = 1e-6;

/// `inf{β ≥ 0 : F*_o(β) ≥ f_thr}`, or `None` when the threshold is not met at
/// `beta_max`. Relies on `F*_o` being nondecreasing in `β`.
pub fn beta_dist(
    o: OrbitId,
    state: &EnergyFrameState,
    h: &HamiltonianDirection,
    beta_max: f64,
    thresholds: &DistillThresholds,
) -> Result<Option<f64>> {
    check_beta_max(beta_max)?;
    Ok(beta_dist_from(&orbit_overlaps(o, h), state, h.gap(), beta_max, thresholds.for_orbit(o)))
}

fn beta_dist_from(overlaps: &[f64], state: &EnergyFrameState, gap: f64, beta_max: f64, f_thr: f64) -> Option<f64> {
    let reached = |beta: f64| {
        let ctx = ThermalContext::new(beta, gap).expect("beta within [0, beta_max]");
        orbit_fidelity_from(overlaps, state, &ctx) >= f_thr
    };
    if reached(0.0) {
        return Some(0.0);
    }
    if !reached(beta_max) {
        return None;
    }
    Some(bisect_switch(reached, 0.0, beta_max, BETA_DIST_TOL))
}

/// Settings for [`landscape`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeConfig {
    pub n_lon: usize,
    pub n_lat: usize,
    pub beta_max: f64,
    pub gap: f64,
    pub thresholds: DistillThresholds,
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        Self {
            n_lon: 181,
            n_lat: 91,
            beta_max: 10.0,
            gap: crate::thermal::DEFAULT_GAP,
            thresholds: DistillThresholds::default(),
        }
    }
}

/// `β_dist` over Hamiltonian directions on an equirectangular grid.
///
/// Cells are stored row-major, latitude outer: `values[j * n_lon + i]` is the
/// cell at `lon[i]`, `lat[j]`. `None` marks an unattainable threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub orbit: OrbitId,
    pub state: EnergyFrameState,
    pub config: LandscapeConfig,
    pub n_lon: usize,
    pub n_lat: usize,
    pub lon: Vec<f64>,
    pub lat: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl LandscapeGrid {
    pub fn value(&self, i_lon: usize, j_lat: usize) -> Option<f64> {
        self.values[j_lat * self.n_lon + i_lon]
    }

    pub fn direction(&self, i_lon: usize, j_lat: usize) -> UnitVector3 {
        UnitVector3::from_lon_lat(self.lon[i_lon], self.lat[j_lat])
    }

    /// `lon,lat,beta_dist` rows in storage order; unattainable cells are empty.
    pub fn to_csv(&self, degrees: bool) -> String {
        let conv = |x: f64| if degrees { x.to_degrees() } else { x };
        let mut out = String::from("lon,lat,beta_dist\n");
        for j in 0..self.n_lat {
            for i in 0..self.n_lon {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(conv(self.lon[i])),
                    fmt_f64(conv(self.lat[j])),
                    fmt_opt(self.value(i, j))
                );
            }
        }
        out
    }

    /// Cells holding a local minimum: connected plateaus of finite values
    /// with no strictly lower neighbour. Longitude wraps; each pole row is a
    /// single point.
    pub fn local_minima(&self) -> Vec<Vec<(usize, usize)>> {
        let (nl, nb) = (self.n_lon, self.n_lat);
        let idx = |i: usize, j: usize| j * nl + i;
        let val = |k: usize| self.values[k].unwrap_or(f64::INFINITY);
        let neighbours = |i: usize, j: usize| -> Vec<usize> {
            let mut out = Vec::with_capacity(8);
            let pole = |j: usize| j == 0 || j == nb - 1;
            if pole(j) {
                out.extend((0..nl).filter(|&k| k != i).map(|k| idx(k, j)));
            }
            for dj in [-1i64, 0, 1] {
                let jj = j as i64 + dj;
                if jj < 0 || jj >= nb as i64 {
                    continue;
                }
                let jj = jj as usize;
                if pole(jj) && jj != j {
                    out.extend((0..nl).map(|k| idx(k, jj)));
                    continue;
                }
                if pole(jj) {
                    continue;
                }
                for di in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = (i as i64 + di).rem_euclid(nl as i64) as usize;
                    out.push(idx(ii, jj));
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        };

        let n = nl * nb;
        let mut seen = vec![false; n];
        let mut basins = Vec::new();
        for start in 0..n {
            if seen[start] || self.values[start].is_none() {
                continue;
            }
            let v0 = val(start);
            // flood the equal-valued plateau containing `start`
            let mut plateau = vec![start];
            let mut stack = vec![start];
            seen[start] = true;
            let mut is_min = true;
            while let Some(k) = stack.pop() {
                for nbk in neighbours(k % nl, k / nl) {
                    let v = val(nbk);
                    if v < v0 {
                        is_min = false;
                    } else if v == v0 && !seen[nbk] {
                        seen[nbk] = true;
                        plateau.push(nbk);
                        stack.push(nbk);
                    }
                }
            }
            if is_min {
                plateau.sort_unstable();
                basins.push(plateau.into_iter().map(|k| (k % nl, k / nl)).collect());
            }
        }
        basins
    }
}

/// Grid longitudes `−π + 2πi/n` (half-open) and latitudes
/// `−π/2 + πj/(n − 1)` (both poles included).
pub fn landscape_axes(n_lon: usize, n_lat: usize) -> (Vec<f64>, Vec<f64>) {
    use std::f64::consts::{FRAC_PI_2, PI};
    let lon = (0..n_lon).map(|i| -PI + 2.0 * PI * i as f64 / n_lon as f64).collect();
    let lat = (0..n_lat)
        .map(|j| if j + 1 == n_lat { FRAC_PI_2 } else { -FRAC_PI_2 + PI * j as f64 / (n_lat - 1) as f64 })
        .collect();
    (lon, lat)
}

/// Evaluates [`beta_dist`] for the Hamiltonian `n(lon, lat)·σ` at every cell.
/// Runs in parallel; the result is independent of scheduling.
pub fn landscape(o: OrbitId, state: &EnergyFrameState, cfg: &LandscapeConfig) -> Result<LandscapeGrid> {
    if cfg.n_lon < 2 || cfg.n_lat < 2 {
        return Err(crate::Error::InvalidArgument(format!(
            "landscape needs n_lon, n_lat ≥ 2, got {} × {}",
            cfg.n_lon, cfg.n_lat
        )));
    }
    check_beta_max(cfg.beta_max)?;
    HamiltonianDirection::new(UnitVector3::z(), cfg.gap)?;
    let (lon, lat) = landscape_axes(cfg.n_lon, cfg.n_lat);
    let f_thr = cfg.thresholds.for_orbit(o);
    let values = (0..cfg.n_lon * cfg.n_lat)
        .into_par_iter()
        .map(|k| {
            let n = UnitVector3::from_lon_lat(lon[k % cfg.n_lon], lat[k / cfg.n_lon]);
            let h = HamiltonianDirection::new(n, cfg.gap).expect("gap checked");
            beta_dist_from(&orbit_overlaps(o, &h), state, cfg.gap, cfg.beta_max, f_thr)
        })
        .collect();
    Ok(LandscapeGrid {
        orbit: o,
        state: *state,
        config: *cfg,
        n_lon: cfg.n_lon,
        n_lat: cfg.n_lat,
        lon,
        lat,
        values,
    })
}
