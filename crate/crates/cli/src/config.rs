//! Experiment configuration. Everything a run depends on lives here, and
//! the report embeds it verbatim.

use std::str::FromStr;

use landau_core::exact::Rational;
use landau_core::surface::SurfaceGeometry;
use landau_core::torus::ladder::Differencing;
use landau_core::torus::{GridPolicy, SolverOptions, TorusGeometry, TrigPoly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Experiment {
    Fock(FockConfig),
    Surface(SurfaceConfig),
    Dim(DimConfig),
    Torus(TorusConfig),
}

impl Experiment {
    pub fn command(&self) -> &'static str {
        match self {
            Experiment::Fock(_) => "fock",
            Experiment::Surface(_) => "surface",
            Experiment::Dim(_) => "dim",
            Experiment::Torus(_) => "torus",
        }
    }
}

/// An operator on the truncated Fock space, written `pi:M`, `a:I` or `adag:I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MatrixKind {
    Projector { m: usize },
    Lower { i: usize },
    Raise { i: usize },
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, arg) = s.split_once(':').ok_or_else(|| format!("expected NAME:INDEX, got '{s}'"))?;
        let v: usize = arg.parse().map_err(|_| format!("bad index '{arg}'"))?;
        match name {
            "pi" => Ok(MatrixKind::Projector { m: v }),
            "a" => Ok(MatrixKind::Lower { i: v }),
            "adag" => Ok(MatrixKind::Raise { i: v }),
            _ => Err(format!("unknown operator '{name}' (use pi, a or adag)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockConfig {
    pub n: usize,
    pub degree: usize,
    pub check_identities: bool,
    pub dump: Option<MatrixKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub genus: u32,
    /// magnetic intensity as an exact fraction, e.g. `5` or `9/2`
    pub b: String,
    /// `A/2π`; defaults to the unit-curvature area (or 1 for the torus)
    pub area_over_2pi: Option<String>,
    pub levels: u32,
    /// number of random geometries on which the induction is compared
    pub random: usize,
    pub sphere_check: bool,
}

impl SurfaceConfig {
    pub fn geometry(&self) -> Result<SurfaceGeometry, ConfigError> {
        let b = parse_rational(&self.b).map_err(|m| ConfigError::new("surface.b", m))?;
        let area = match &self.area_over_2pi {
            Some(a) => parse_rational(a).map_err(|m| ConfigError::new("surface.area_over_2pi", m))?,
            None if self.genus == 1 => Rational::from_integer(1),
            None => Rational::from_integer((2 * self.genus as i128 - 2).abs()),
        };
        SurfaceGeometry::new(self.genus, b, area).map_err(|e| ConfigError::new("surface", e.to_string()))
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let q = Rational::from_str(s.trim()).map_err(|_| format!("cannot parse '{s}' as a fraction"))?;
    if q <= Rational::from_integer(0) {
        return Err(format!("must be positive, got {q}"));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DimTarget {
    Surface { genus: u32, d: u64 },
    /// product of flat tori of the given degrees
    Torus { d_list: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimConfig {
    pub target: DimTarget,
    pub k: u64,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectSpec {
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusConfig {
    pub d: u32,
    pub k_list: Vec<u32>,
    pub grid: GridPolicy,
    /// levels `0..levels` are resolved; 0 skips the eigensolver
    pub levels: usize,
    /// guard on `k h²`
    pub flux_limit: f64,
    pub defects: Option<DefectSpec>,
    pub kernel_compare: bool,
    pub kernel_stride: usize,
    pub ladder: Option<usize>,
    pub scheme: Differencing,
    pub peaked: bool,
    /// `solver.seed` is replaced by the run seed
    pub solver: SolverOptions,
}

impl TorusConfig {
    pub fn symbols(&self) -> Result<Option<(TrigPoly, TrigPoly)>, ConfigError> {
        let Some(spec) = &self.defects else { return Ok(None) };
        let side = TorusGeometry::new(self.d.max(1))
            .map_err(|e| ConfigError::new("torus.d", e.to_string()))?
            .side();
        let f = TrigPoly::parse(side, &spec.f).map_err(|e| ConfigError::new("torus.defects.f", e.to_string()))?;
        let g = TrigPoly::parse(side, &spec.g).map_err(|e| ConfigError::new("torus.defects.g", e.to_string()))?;
        Ok(Some((f, g)))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match &self.experiment {
            Experiment::Fock(c) => {
                if !(1..=2).contains(&c.n) {
                    return Err(ConfigError::new("fock.n", format!("must be 1 or 2, got {}", c.n)));
                }
                if !(1..=12).contains(&c.degree) {
                    return Err(ConfigError::new("fock.degree", format!("must lie in 1..=12, got {}", c.degree)));
                }
                match c.dump {
                    Some(MatrixKind::Projector { m }) if m > c.degree => {
                        Err(ConfigError::new("fock.dump.m", format!("level {m} exceeds the degree cap")))
                    }
                    Some(MatrixKind::Lower { i } | MatrixKind::Raise { i }) if i == 0 || i > c.n => {
                        Err(ConfigError::new("fock.dump.i", format!("coordinate {i} outside 1..={}", c.n)))
                    }
                    _ => Ok(()),
                }
            }
            Experiment::Surface(c) => {
                if c.levels == 0 {
                    return Err(ConfigError::new("surface.levels", "must be positive"));
                }
                c.geometry().map(|_| ())
            }
            Experiment::Dim(c) => {
                if c.k == 0 {
                    return Err(ConfigError::new("dim.k", "must be positive"));
                }
                match &c.target {
                    DimTarget::Surface { d: 0, .. } => Err(ConfigError::new("dim.target.d", "must be positive")),
                    DimTarget::Torus { d_list } if d_list.is_empty() => {
                        Err(ConfigError::new("dim.target.d_list", "must not be empty"))
                    }
                    DimTarget::Torus { d_list } if d_list.contains(&0) => {
                        Err(ConfigError::new("dim.target.d_list", "degrees must be positive"))
                    }
                    _ => Ok(()),
                }
            }
            Experiment::Torus(c) => validate_torus(c),
        }
    }
}

fn validate_torus(c: &TorusConfig) -> Result<(), ConfigError> {
    if c.d == 0 {
        return Err(ConfigError::new("torus.d", "must be positive"));
    }
    if c.k_list.is_empty() {
        return Err(ConfigError::new("torus.k_list", "must not be empty"));
    }
    if c.k_list.contains(&0) {
        return Err(ConfigError::new("torus.k_list", "every k must be positive"));
    }
    match c.grid {
        GridPolicy::Fixed { n } if n < 4 => return Err(ConfigError::new("torus.grid.n", "need at least 4 points")),
        GridPolicy::Proportional { per_k } if !(per_k > 0.0) => {
            return Err(ConfigError::new("torus.grid.per_k", "must be positive"))
        }
        GridPolicy::Flux { limit } if !(limit > 0.0) => {
            return Err(ConfigError::new("torus.grid.limit", "must be positive"))
        }
        _ => {}
    }
    if !(c.flux_limit > 0.0) {
        return Err(ConfigError::new("torus.flux_limit", "must be positive"));
    }
    if c.levels == 0 && (c.defects.is_some() || c.kernel_compare || c.ladder.is_some()) {
        return Err(ConfigError::new("torus.levels", "defects, kernels and ladders need at least one level"));
    }
    if let Some(m) = c.ladder {
        if m == 0 || m >= c.levels {
            return Err(ConfigError::new("torus.ladder", format!("need 1 <= m < levels = {}, got {m}", c.levels)));
        }
    }
    if c.kernel_stride == 0 {
        return Err(ConfigError::new("torus.kernel_stride", "must be positive"));
    }
    if !(c.solver.tol > 0.0) || c.solver.max_iter == 0 || c.solver.degree == 0 {
        return Err(ConfigError::new("torus.solver", "tol, max_iter and degree must be positive"));
    }
    c.symbols().map(|_| ())
}
