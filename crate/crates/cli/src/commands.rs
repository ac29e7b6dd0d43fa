use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thermomagic::catalytic::{self, CatalyticReport, CatalyticTargets, FreeEnergy};
use thermomagic::distill::{self, LandscapeConfig, LandscapeGrid};
use thermomagic::export::{fmt_f64, fmt_opt, to_json, write_text};
use thermomagic::extremal::{self, ExtremalResult};
use thermomagic::oracle::{self, Check, VerifyReport};
use thermomagic::stabiliser::{orbit_directions, DistillThresholds};
use thermomagic::thermal::{cone_mesh, ThermalCone};
use thermomagic::volume::{self, VolumeEstimate};
use thermomagic::witness::{self, CriticalBetaConfig, WitnessReport};
use thermomagic::{EnergyFrameState, OrbitId, ThermalContext, UnitVector3};

use crate::args::{CatalyticOpts, Common, ExtremalOpts, InputEcho, MapOpts, MeshOpts, SweepOpts, VolumeOpts};
use crate::Fail;

const DEFAULT_BETA_MAX: f64 = 10.0;

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(path) => write_text(path, text).map_err(|e| Fail::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish_verify(enabled: bool, checks: impl FnOnce() -> Result<Vec<Check>, Fail>) -> Result<(), Fail> {
    if !enabled {
        return Ok(());
    }
    let report = VerifyReport::new(checks()?);
    eprint!("{}", to_json(&report)?);
    if report.pass {
        Ok(())
    } else {
        Err(Fail::Verify(format!("max deviation {:e}", report.max_deviation)))
    }
}

fn beta_max(v: Option<f64>) -> f64 {
    v.unwrap_or(DEFAULT_BETA_MAX)
}

#[derive(Serialize)]
struct WitnessOutput {
    input: InputEcho,
    #[serde(flatten)]
    report: WitnessReport,
    robustness: f64,
    thermometer: Option<f64>,
}

pub fn witness(common: Common) -> Result<(), Fail> {
    let (state, h, ctx) = (common.state()?, common.hamiltonian()?, common.context()?);
    let report = witness::witness(&state, &h, &ctx);
    let thermometer = if state.is_incoherent() { witness::thermometer(state.p, &h, &ctx).ok() } else { None };
    let out = WitnessOutput { input: common.echo()?, report, robustness: witness::robustness(report.value), thermometer };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || Ok(oracle::verify_witness(&state, &h, &ctx)?.checks))
}

#[derive(Serialize)]
struct CriticalBetaOutput {
    input: InputEcho,
    beta_max: f64,
    beta_crt: Option<f64>,
    closed_form: Option<f64>,
}

/// Evenly spaced points on `[lo, hi]`, endpoints exact.
fn sweep(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

pub fn critical_beta(common: Common, opts: SweepOpts) -> Result<(), Fail> {
    let h = common.hamiltonian()?;
    let bmax = beta_max(opts.beta_max);
    let cfg = CriticalBetaConfig::default();
    if let Some(n) = opts.sweep_n {
        let p = common.p()?;
        let c_top = opts.c_max.unwrap_or_else(|| EnergyFrameState::max_coherence(p));
        let rows: Vec<(f64, Option<f64>)> = sweep(0.0, c_top, n)
            .into_par_iter()
            .map(|c| -> Result<_, Fail> {
                let s = EnergyFrameState::new(p, c)?;
                Ok((c, witness::critical_beta_with(&s, &h, bmax, &cfg)?))
            })
            .collect::<Result<_, _>>()?;
        let mut csv = String::from("c,beta_crt\n");
        for (c, b) in &rows {
            let _ = writeln!(csv, "{},{}", fmt_f64(*c), fmt_opt(*b));
        }
        emit(common.out.as_deref(), &csv)?;
        return finish_verify(common.verify, || {
            let mut checks = Vec::new();
            for (c, b) in &rows {
                if let Some(b) = b {
                    checks.extend(threshold_checks(&EnergyFrameState::new(p, *c)?, &common, *b, cfg.tol)?);
                }
            }
            Ok(checks)
        });
    }
    let state = common.state()?;
    let beta_crt = witness::critical_beta_with(&state, &h, bmax, &cfg)?;
    let closed_form = if state.is_incoherent() { witness::critical_beta_closed_form(state.p, &h) } else { None };
    let out = CriticalBetaOutput { input: common.echo()?, beta_max: bmax, beta_crt, closed_form };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || {
        let mut checks = match beta_crt {
            Some(b) => threshold_checks(&state, &common, b, cfg.tol)?,
            None => Vec::new(),
        };
        if let (Some(b), Some(cf)) = (beta_crt, closed_form) {
            if cf <= bmax {
                checks.push(Check::close("bisection vs closed form", b, cf, 1e-6));
            }
        }
        Ok(checks)
    })
}

/// The witness straddles 1 across a reported threshold (or starts above it
/// at `β = 0`).
fn threshold_checks(state: &EnergyFrameState, common: &Common, b: f64, tol: f64) -> Result<Vec<Check>, Fail> {
    let h = common.hamiltonian()?;
    let at = |beta: f64| -> Result<f64, Fail> {
        Ok(witness::witness(state, &h, &ThermalContext::new(beta.max(0.0), h.gap())?).value)
    };
    let above = at(b)?;
    let mut checks = vec![Check { pass: above > 1.0, ..Check::close("witness above 1 at threshold", above, 1.0, f64::INFINITY) }];
    if b > 0.0 {
        let below = at(b - 2.0 * tol)?;
        checks.push(Check { pass: below <= 1.0, ..Check::close("witness at most 1 below threshold", below, 1.0, f64::INFINITY) });
    }
    Ok(checks)
}

#[derive(Serialize)]
struct CriticalCoherenceOutput {
    input: InputEcho,
    c_crt: Option<f64>,
    c_physical_max: f64,
}

pub fn critical_coherence(common: Common, opts: SweepOpts) -> Result<(), Fail> {
    let h = common.hamiltonian()?;
    let p = common.p()?;
    let verify_at = |ctx: &ThermalContext, c: f64| -> Result<Vec<Check>, Fail> {
        let m = witness::witness(&EnergyFrameState::new(p, c)?, &h, ctx).value;
        let mut checks = vec![Check { pass: m > 1.0, ..Check::close("witness above 1 at c_crt", m, 1.0, f64::INFINITY) }];
        if c > 0.0 {
            let below = witness::witness(&EnergyFrameState::new(p, (c - 1e-9).max(0.0))?, &h, ctx).value;
            checks.push(Check::close("witness crosses 1 at c_crt", below, 1.0, 1e-8));
        }
        Ok(checks)
    };
    if let Some(n) = opts.sweep_n {
        let bmax = beta_max(opts.beta_max);
        let rows: Vec<(f64, Option<f64>)> = sweep(0.0, bmax, n)
            .into_par_iter()
            .map(|beta| -> Result<_, Fail> {
                let ctx = ThermalContext::new(beta, h.gap())?;
                Ok((beta, witness::critical_coherence(p, &h, &ctx)?))
            })
            .collect::<Result<_, _>>()?;
        let mut csv = String::from("beta,c_crt\n");
        for (b, c) in &rows {
            let _ = writeln!(csv, "{},{}", fmt_f64(*b), fmt_opt(*c));
        }
        emit(common.out.as_deref(), &csv)?;
        return finish_verify(common.verify, || {
            let mut checks = Vec::new();
            for (b, c) in &rows {
                if let Some(c) = c {
                    checks.extend(verify_at(&ThermalContext::new(*b, h.gap())?, *c)?);
                }
            }
            Ok(checks)
        });
    }
    let ctx = common.context()?;
    let c_crt = witness::critical_coherence(p, &h, &ctx)?;
    let out = CriticalCoherenceOutput { input: common.echo()?, c_crt, c_physical_max: EnergyFrameState::max_coherence(p) };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || match c_crt {
        Some(c) => verify_at(&ctx, c),
        None => Ok(Vec::new()),
    })
}

pub fn cone_mesh_cmd(common: Common, opts: MeshOpts) -> Result<(), Fail> {
    let (state, h, ctx) = (common.state()?, common.hamiltonian()?, common.context()?);
    let mesh = cone_mesh(&state, &h, &ctx, opts.n_q.unwrap_or(64), opts.n_phi.unwrap_or(64))?;
    emit(common.out.as_deref(), &mesh.to_csv())?;
    finish_verify(common.verify, || {
        let cone = ThermalCone::new(&state, &h, &ctx);
        let outside = (0..mesh.len()).filter(|&k| !cone.contains(&mesh.point(k), 1e-10)).count();
        let max_l1 = (0..mesh.len()).map(|k| mesh.point(k).lp_norm(1)).fold(0.0, f64::max);
        let m = witness::witness(&state, &h, &ctx).value;
        Ok(vec![
            Check::close("mesh points outside the cone", outside as f64, 0.0, 0.0),
            Check::from_below("mesh max ℓ1 vs witness", m, max_l1, f64::INFINITY),
        ])
    })
}

#[derive(Serialize)]
struct VolumeOutput {
    input: InputEcho,
    normalisation: &'static str,
    #[serde(flatten)]
    magic: VolumeEstimate,
    cone: VolumeEstimate,
    witness: f64,
}

pub fn magic_volume(common: Common, opts: VolumeOpts) -> Result<(), Fail> {
    let (state, h, ctx) = (common.state()?, common.hamiltonian()?, common.context()?);
    let seed = common.seed.unwrap_or(0);
    let v = volume::cone_volumes(&state, &h, &ctx, opts.n_samples.unwrap_or(1_000_000), seed)?;
    let m = witness::witness(&state, &h, &ctx).value;
    let out = VolumeOutput { input: common.echo()?, normalisation: volume::NORMALISATION, magic: v.magic, cone: v.cone, witness: m };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || {
        let mut checks = vec![Check::close(
            "magic samples outside the cone",
            v.magic.hits.saturating_sub(v.cone.hits) as f64,
            0.0,
            0.0,
        )];
        if m <= 1.0 {
            checks.push(Check::close("magic fraction without witness", v.magic.fraction, 0.0, 0.0));
        }
        Ok(checks)
    })
}

#[derive(Serialize)]
struct MapJson<'a> {
    #[serde(flatten)]
    grid: &'a LandscapeGrid,
    n_basins: usize,
}

pub fn distill_map(common: Common, opts: MapOpts) -> Result<(), Fail> {
    let orbit = opts.orbit.ok_or_else(|| Fail::Input("--orbit is required (T or H)".into()))?;
    let out = common.out.clone().ok_or_else(|| Fail::Input("--out is required for distill-map".into()))?;
    let state = common.state()?;
    let defaults = LandscapeConfig::default();
    let thresholds = DistillThresholds {
        f_thr_t: opts.f_thr_t.unwrap_or(defaults.thresholds.f_thr_t),
        f_thr_h: opts.f_thr_h.unwrap_or(defaults.thresholds.f_thr_h),
    };
    let cfg = LandscapeConfig {
        n_lon: opts.n_lon.unwrap_or(defaults.n_lon),
        n_lat: opts.n_lat.unwrap_or(defaults.n_lat),
        beta_max: beta_max(opts.beta_max),
        gap: common.gap(),
        thresholds,
    };
    let grid = distill::landscape(orbit, &state, &cfg)?;
    emit(Some(&out), &grid.to_csv(opts.degrees))?;
    let json = MapJson { grid: &grid, n_basins: grid.local_minima().len() };
    emit(Some(&out.with_extension("json")), &to_json(&json)?)?;
    finish_verify(common.verify, || verify_map(orbit, &state, &grid))
}

/// Spot-checks a spread of cells: the threshold is crossed at the reported
/// `β_dist`, and the orbit fidelity there matches dense boundary sampling.
fn verify_map(orbit: OrbitId, state: &EnergyFrameState, grid: &LandscapeGrid) -> Result<Vec<Check>, Fail> {
    let f_thr = grid.config.thresholds.for_orbit(orbit);
    let n = grid.values.len();
    let mut checks = Vec::new();
    for k in (0..n).step_by((n / 16).max(1)) {
        let (i, j) = (k % grid.n_lon, k / grid.n_lon);
        let Some(b) = grid.values[k] else { continue };
        let h = thermomagic::HamiltonianDirection::new(grid.direction(i, j), grid.config.gap)?;
        let ctx = ThermalContext::new(b, h.gap())?;
        let f = distill::orbit_fidelity(&ctx, orbit, state, &h);
        checks.push(Check { pass: f >= f_thr, ..Check::close("orbit fidelity reaches threshold", f, f_thr, f64::INFINITY) });
        let sampled = orbit_directions(orbit)
            .iter()
            .map(|u| oracle::fidelity_by_sampling(&ctx, u, state, &h, 2048, 1024))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::from_below("orbit fidelity vs boundary sampling", f, sampled, 1e-4));
    }
    Ok(checks)
}

#[derive(Serialize)]
struct ExtremalOutput {
    m: f64,
    closed_form: ExtremalResult,
    brute_force_v: f64,
    brute_force_n_dirs: usize,
    brute_force_all_tie: bool,
    brute_force_directions: Vec<UnitVector3>,
    optimal_hamiltonian: UnitVector3,
}

pub fn optimal_h(common: Common, opts: ExtremalOpts) -> Result<(), Fail> {
    let m = match opts.m {
        Some(m) => m,
        None => extremal::thermodynamic_m(common.p()?, &common.context()?),
    };
    let n_dirs = opts.n_dirs.unwrap_or(10_000);
    let closed_form = extremal::extremal_closed_form(m)?;
    let brute = extremal::v_brute_force(m, n_dirs)?;
    let out = ExtremalOutput {
        m,
        closed_form: closed_form.clone(),
        brute_force_v: brute.v,
        brute_force_n_dirs: n_dirs,
        brute_force_all_tie: brute.all_tie,
        brute_force_directions: if brute.all_tie { Vec::new() } else { brute.directions.clone() },
        optimal_hamiltonian: extremal::optimal_hamiltonian(),
    };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || {
        let tol = if n_dirs >= 10_000 { 2e-3 } else { 2e-2 };
        Ok(vec![Check::from_below("V closed form vs Fibonacci sphere", closed_form.v, brute.v, tol)])
    })
}

#[derive(Serialize)]
struct AtBeta {
    beta: f64,
    free_energy: FreeEnergy,
    magic_feasible: bool,
}

#[derive(Serialize)]
struct CatalyticOutput {
    input: InputEcho,
    #[serde(flatten)]
    report: CatalyticReport,
    at_beta: Option<AtBeta>,
}

pub fn catalytic_cmd(common: Common, opts: CatalyticOpts) -> Result<(), Fail> {
    let (state, h) = (common.state()?, common.hamiltonian()?);
    let targets = opts.targets.unwrap_or(CatalyticTargets::ModeCompatible);
    let report = catalytic::catalytic_report(&state, &h, beta_max(opts.beta_max), targets)?;
    let at_beta = match common.beta {
        Some(beta) => Some(AtBeta {
            beta,
            free_energy: catalytic::free_energy(&state, &h, beta)?,
            magic_feasible: catalytic::catalytic_magic_feasible(&state, &h, beta, targets),
        }),
        None => None,
    };
    let verify_pair = (report.beta_crt_cat, report.beta_crt);
    let out = CatalyticOutput { input: common.echo()?, report, at_beta };
    emit(common.out.as_deref(), &to_json(&out)?)?;
    finish_verify(common.verify, || {
        Ok(match verify_pair {
            (Some(cat), Some(to)) => {
                vec![Check { pass: cat <= to + 1e-8, ..Check::close("catalytic threshold not above TO", cat, to, f64::INFINITY) }]
            }
            _ => Vec::new(),
        })
    })
}
