//! Command-line flags and their translation into an [`ExperimentConfig`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use landau_core::torus::ladder::Differencing;
use landau_core::torus::{GridPolicy, SolverOptions};

use crate::config::{
    ConfigError, DefectSpec, DimConfig, DimTarget, Experiment, ExperimentConfig, FockConfig, MatrixKind, SurfaceConfig,
    TorusConfig,
};
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "landau-lab", version, about = "Landau levels, Toeplitz asymptotics and dimension counts")]
pub struct Cli {
    /// directory for report files
    #[arg(long, global = true, default_value = "reports")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// report formats, comma separated
    #[arg(long, global = true, value_delimiter = ',', default_value = "json,csv")]
    pub format: Vec<Format>,
    /// read the whole experiment from a JSON config instead of flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Fock-space algebra
    Fock(FockArgs),
    /// Closed-form spectra of constant-curvature surfaces
    Surface(SurfaceArgs),
    /// Riemann-Roch dimension of a Landau level
    Dim(DimArgs),
    /// Discretized magnetic Laplacian on a flat torus
    Torus(TorusArgs),
}

#[derive(Debug, Args)]
pub struct FockArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    #[arg(long)]
    pub check_identities: bool,
    /// dump `pi:M`, `a:I` or `adag:I` as a JSON matrix
    #[arg(long)]
    pub dump: Option<MatrixKind>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// magnetic field, an exact fraction
    #[arg(long = "B", default_value = "2")]
    pub b: String,
    /// area divided by 2π; defaults to unit curvature
    #[arg(long)]
    pub area: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub levels: u32,
    /// also compare the induction on this many random geometries
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long)]
    pub sphere_check: bool,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    /// `g=G,d=D`
    #[arg(long, conflicts_with = "torus", required_unless_present = "torus")]
    pub surface: Option<String>,
    /// degrees of the torus factors, comma separated
    #[arg(long, value_delimiter = ',')]
    pub torus: Option<Vec<u64>>,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// values of k, comma separated
    #[arg(long = "k", value_delimiter = ',', default_value = "4,6,8,10,12")]
    pub k_list: Vec<u32>,
    /// `N`, `per-k=C` (N = ⌈C k √d⌉) or `flux=L` (smallest N with k h² ≤ L)
    #[arg(long, default_value = "per-k=8")]
    pub grid: GridArg,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// refuse grids with k h² above this
    #[arg(long, default_value_t = 0.05)]
    pub flux_limit: f64,
    /// `f=SYMBOL g=SYMBOL`, e.g. `f=cosx g=siny`
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    pub defects: Option<Vec<String>>,
    #[arg(long)]
    pub kernel_compare: bool,
    #[arg(long, default_value_t = 4)]
    pub kernel_stride: usize,
    /// `m=M`
    #[arg(long)]
    pub ladder: Option<String>,
    #[arg(long, default_value = "centered", value_parser = parse_scheme)]
    pub scheme: Differencing,
    #[arg(long)]
    pub peaked: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridArg(pub GridPolicy);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("bad number '{v}'"));
        if let Some(v) = s.strip_prefix("per-k=") {
            return Ok(GridArg(GridPolicy::Proportional { per_k: num(v)? }));
        }
        if let Some(v) = s.strip_prefix("flux=") {
            return Ok(GridArg(GridPolicy::Flux { limit: num(v)? }));
        }
        s.parse::<usize>()
            .map(|n| GridArg(GridPolicy::Fixed { n }))
            .map_err(|_| format!("grid must be N, per-k=C or flux=L, got '{s}'"))
    }
}

fn parse_scheme(s: &str) -> Result<Differencing, String> {
    match s {
        "centered" => Ok(Differencing::Centered),
        "forward" => Ok(Differencing::Forward),
        _ => Err(format!("unknown scheme '{s}' (use centered or forward)")),
    }
}

fn key_value<'a>(path: &str, s: &'a str, key: &str) -> Result<&'a str, ConfigError> {
    s.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| ConfigError::new(path, format!("expected {key}=VALUE, got '{s}'")))
}

impl Cli {
    /// The experiment described by the flags, or by `--config` when given.
    pub fn to_config(&self) -> Result<ExperimentConfig, ConfigError> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
            return serde_json::from_str(&text).map_err(|e| ConfigError::new("config", e.to_string()));
        }
        let command = self
            .command
            .as_ref()
            .ok_or_else(|| ConfigError::new("command", "a subcommand or --config is required"))?;
        let experiment = match command {
            Command::Fock(a) => Experiment::Fock(FockConfig {
                n: a.n,
                degree: a.degree,
                check_identities: a.check_identities,
                dump: a.dump,
            }),
            Command::Surface(a) => Experiment::Surface(SurfaceConfig {
                genus: a.genus,
                b: a.b.clone(),
                area_over_2pi: a.area.clone(),
                levels: a.levels,
                random: a.random,
                sphere_check: a.sphere_check,
            }),
            Command::Dim(a) => Experiment::Dim(DimConfig { target: dim_target(a)?, k: a.k, m: a.m }),
            Command::Torus(a) => Experiment::Torus(torus_config(a, self.seed)?),
        };
        Ok(ExperimentConfig { seed: self.seed, experiment })
    }
}

fn dim_target(a: &DimArgs) -> Result<DimTarget, ConfigError> {
    if let Some(d_list) = &a.torus {
        return Ok(DimTarget::Torus { d_list: d_list.clone() });
    }
    let spec = a.surface.as_deref().unwrap_or_default();
    let mut genus = None;
    let mut d = None;
    for part in spec.split(',') {
        let bad = || ConfigError::new("dim.surface", format!("expected g=G,d=D, got '{spec}'"));
        let (key, value) = part.split_once('=').ok_or_else(bad)?;
        let v: u64 = value.trim().parse().map_err(|_| bad())?;
        match key.trim() {
            "g" => genus = Some(v as u32),
            "d" => d = Some(v),
            _ => return Err(bad()),
        }
    }
    match (genus, d) {
        (Some(genus), Some(d)) => Ok(DimTarget::Surface { genus, d }),
        _ => Err(ConfigError::new("dim.surface", "both g and d are required")),
    }
}

fn torus_config(a: &TorusArgs, seed: u64) -> Result<TorusConfig, ConfigError> {
    let defects = match &a.defects {
        Some(v) => Some(DefectSpec {
            f: key_value("torus.defects.f", &v[0], "f")?.to_string(),
            g: key_value("torus.defects.g", &v[1], "g")?.to_string(),
        }),
        None => None,
    };
    let ladder = match &a.ladder {
        Some(s) => {
            let v = key_value("torus.ladder", s, "m").unwrap_or(s);
            Some(v.parse().map_err(|_| ConfigError::new("torus.ladder", format!("bad level '{s}'")))?)
        }
        None => None,
    };
    let defaults = SolverOptions::default();
    Ok(TorusConfig {
        d: a.d,
        k_list: a.k_list.clone(),
        grid: a.grid.0,
        levels: a.levels,
        flux_limit: a.flux_limit,
        defects,
        kernel_compare: a.kernel_compare,
        kernel_stride: a.kernel_stride,
        ladder,
        scheme: a.scheme,
        peaked: a.peaked,
        solver: SolverOptions {
            tol: a.tol.unwrap_or(defaults.tol),
            max_iter: a.max_iter.unwrap_or(defaults.max_iter),
            seed,
            ..defaults
        },
    })
}
