use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thermomagic::catalytic::CatalyticTargets;
use thermomagic::{EnergyFrameState, HamiltonianDirection, OrbitId, ThermalContext, UnitVector3};

use crate::Fail;

#[derive(Debug, Parser)]
#[command(name = "thermomagic", version, about = "Magic-state generation under qubit thermal operations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness report for one input, Hamiltonian and bath (JSON).
    Witness {
        #[command(flatten)]
        common: Common,
    },
    /// Critical inverse temperature; with --sweep-n a CSV over coherence.
    CriticalBeta {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: SweepOpts,
    },
    /// Critical coherence; with --sweep-n a CSV over inverse temperature.
    CriticalCoherence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: SweepOpts,
    },
    /// Boundary samples of the future thermal cone (CSV).
    ConeMesh {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: MeshOpts,
    },
    /// Monte-Carlo volume of the nonstabiliser cone (JSON).
    MagicVolume {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: VolumeOpts,
    },
    /// Distillability landscape over Hamiltonian orientations (CSV + JSON).
    DistillMap {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: MapOpts,
    },
    /// Optimal Hamiltonian orientation and the max–min distance (JSON).
    OptimalH {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: ExtremalOpts,
    },
    /// Catalytic critical inverse temperature (JSON).
    Catalytic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: CatalyticOpts,
    },
}

/// Field-wise `self` over `base`; switches are OR-ed.
pub trait Overlay: Sized {
    fn overlay(self, base: Self) -> Self;
}

macro_rules! overlay {
    ($ty:ident { $($opt:ident),* $(,)? } $(switches { $($flag:ident),* })?) => {
        impl Overlay for $ty {
            #[allow(clippy::needless_update)]
            fn overlay(self, base: Self) -> Self {
                Self {
                    $($opt: self.$opt.or(base.$opt),)*
                    $($($flag: self.$flag || base.$flag,)*)?
                    ..self
                }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct Common {
    /// Ground-state population of the input.
    #[arg(long)]
    pub p: Option<f64>,
    /// Transverse Bloch radius of the input, at most 2√(p(1−p)).
    #[arg(long)]
    pub c: Option<f64>,
    /// Hamiltonian axis, normalised internally (default z).
    #[arg(long, allow_hyphen_values = true)]
    pub nx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ny: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nz: Option<f64>,
    /// Bath inverse temperature.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Level spacing ω (default 2).
    #[arg(long)]
    pub gap: Option<f64>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Monte-Carlo seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cross-check against the brute-force oracles; exit 3 on failure.
    #[arg(long)]
    pub verify: bool,
    /// JSON file with default values for any flag.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

overlay!(Common { p, c, nx, ny, nz, beta, gap, out, seed } switches { verify });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct SweepOpts {
    /// Upper end of the β search (default 10).
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Number of sweep points; switches output to CSV.
    #[arg(long)]
    pub sweep_n: Option<usize>,
    /// Upper end of the coherence sweep (default 2√(p(1−p))).
    #[arg(long)]
    pub c_max: Option<f64>,
}

overlay!(SweepOpts { beta_max, sweep_n, c_max });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct MeshOpts {
    /// Populations sampled along the interval (default 64).
    #[arg(long)]
    pub n_q: Option<usize>,
    /// Azimuths per ring (default 64).
    #[arg(long)]
    pub n_phi: Option<usize>,
}

overlay!(MeshOpts { n_q, n_phi });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct VolumeOpts {
    /// Ball samples (default 10⁶).
    #[arg(long)]
    pub n_samples: Option<usize>,
}

overlay!(VolumeOpts { n_samples });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct MapOpts {
    /// Clifford orbit, T or H.
    #[arg(long)]
    pub orbit: Option<OrbitId>,
    #[arg(long)]
    pub n_lon: Option<usize>,
    #[arg(long)]
    pub n_lat: Option<usize>,
    /// Upper end of the β search (default 10).
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub f_thr_t: Option<f64>,
    #[arg(long)]
    pub f_thr_h: Option<f64>,
    /// Write CSV angles in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
}

overlay!(MapOpts { orbit, n_lon, n_lat, beta_max, f_thr_t, f_thr_h } switches { degrees });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct ExtremalOpts {
    /// Radius m; derived from --p, --beta and --gap when absent.
    #[arg(long)]
    pub m: Option<f64>,
    /// Fibonacci-sphere directions for the brute force (default 10⁴).
    #[arg(long)]
    pub n_dirs: Option<usize>,
}

overlay!(ExtremalOpts { m, n_dirs });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct CatalyticOpts {
    /// Upper end of the β search (default 10).
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Target family: mode-compatible (default) or diagonal.
    #[arg(long, value_parser = parse_targets)]
    pub targets: Option<CatalyticTargets>,
}

overlay!(CatalyticOpts { beta_max, targets });

fn parse_targets(s: &str) -> Result<CatalyticTargets, String> {
    match s {
        "diagonal" => Ok(CatalyticTargets::Diagonal),
        "mode-compatible" => Ok(CatalyticTargets::ModeCompatible),
        other => Err(format!("unknown target family `{other}` (diagonal, mode-compatible)")),
    }
}

/// Reads `path` once and fills both argument groups from it.
pub fn load_config<A: DeserializeOwned + Default>(path: Option<&Path>) -> Result<(Common, A), Fail> {
    let Some(path) = path else {
        return Ok((Common::default(), A::default()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail::Input(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Fail::Input(format!("invalid config {}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Fail::Input(format!("invalid config {}: {e}", path.display()));
    Ok((serde_json::from_value(value.clone()).map_err(bad)?, serde_json::from_value(value).map_err(bad)?))
}

pub fn merged<A: Overlay + DeserializeOwned + Default>(common: Common, opts: A) -> Result<(Common, A), Fail> {
    let (base_common, base_opts) = load_config::<A>(common.config.as_deref())?;
    Ok((common.overlay(base_common), opts.overlay(base_opts)))
}

/// Resolved physical inputs echoed into every report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InputEcho {
    pub p: Option<f64>,
    pub c: f64,
    pub n: [f64; 3],
    pub beta: Option<f64>,
    pub gap: f64,
}

impl Common {
    pub fn gap(&self) -> f64 {
        self.gap.unwrap_or(thermomagic::thermal::DEFAULT_GAP)
    }

    pub fn p(&self) -> Result<f64, Fail> {
        self.p.ok_or_else(|| Fail::Input("--p is required".into()))
    }

    pub fn state(&self) -> Result<EnergyFrameState, Fail> {
        Ok(EnergyFrameState::new(self.p()?, self.c.unwrap_or(0.0))?)
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianDirection, Fail> {
        let n = UnitVector3::normalize(self.nx.unwrap_or(0.0), self.ny.unwrap_or(0.0), self.nz.unwrap_or(1.0))?;
        Ok(HamiltonianDirection::new(n, self.gap())?)
    }

    pub fn beta(&self) -> Result<f64, Fail> {
        self.beta.ok_or_else(|| Fail::Input("--beta is required".into()))
    }

    pub fn context(&self) -> Result<ThermalContext, Fail> {
        Ok(ThermalContext::new(self.beta()?, self.gap())?)
    }

    pub fn echo(&self) -> Result<InputEcho, Fail> {
        Ok(InputEcho {
            p: self.p,
            c: self.c.unwrap_or(0.0),
            n: self.hamiltonian()?.axis().to_array(),
            beta: self.beta,
            gap: self.gap(),
        })
    }
}

/// Argument group for commands without extra options.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct NoOpts {}

impl Overlay for NoOpts {
    fn overlay(self, _base: Self) -> Self {
        self
    }
}
