//! Landau levels of the discretized magnetic Laplacian on a flat torus.

pub mod bundle;
pub mod defects;
pub mod eigen;
pub mod kernel;
pub mod ladder;
pub mod levels;
pub mod peaked;
pub mod product;
pub mod toeplitz;
pub mod trig;

use serde::{Deserialize, Serialize};

pub use bundle::{DiscreteBundle, TorusGeometry};
pub use eigen::{lowest_spectrum, SolverOptions, SpectralDecomposition};
pub use levels::{detect_clusters, sharpen_projector, Cluster, LandauProjector};
pub use toeplitz::{toeplitz_der, toeplitz_fn, ToeplitzMatrix};
pub use trig::{hamiltonian_vf, poisson, TrigPoly, VectorField};

use crate::error::{Error, Result};

/// How the grid size follows `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridPolicy {
    Fixed { n: usize },
    /// `N = ⌈c·k·√d⌉`, so that `k h² = 2π/(c² k)` shrinks like `k⁻¹`
    Proportional { per_k: f64 },
    /// smallest `N` with `k h² ≤ limit`
    Flux { limit: f64 },
}

impl GridPolicy {
    pub fn grid(&self, geom: TorusGeometry, k: u32) -> usize {
        match *self {
            GridPolicy::Fixed { n } => n,
            GridPolicy::Proportional { per_k } => {
                (per_k * k.max(1) as f64 * (geom.d as f64).sqrt()).ceil() as usize
            }
            GridPolicy::Flux { limit } => geom.required_n(k, limit),
        }
    }
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy::Proportional { per_k: 8.0 }
    }
}

/// A solved discretization: bundle, lowest spectrum and its clusters.
#[derive(Clone, Debug)]
pub struct TorusModel {
    pub bundle: DiscreteBundle,
    pub spectrum: SpectralDecomposition,
    pub clusters: Vec<Cluster>,
}

impl TorusModel {
    /// Solves for levels `0..=m_max`; `flux_limit` is the acceptance guard on `k h²`.
    pub fn solve(
        geom: TorusGeometry,
        k: u32,
        n: usize,
        m_max: usize,
        flux_limit: f64,
        opts: &SolverOptions,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("Landau levels need k >= 1".into()));
        }
        let bundle = DiscreteBundle::with_limit(geom, k, n, flux_limit)?;
        let kd = (k * geom.d) as usize;
        // one eigenvalue past the last wanted level proves coverage; the block
        // must also hold the whole next level for the filter to separate it
        let count = (m_max + 1) * kd + 1;
        let opts = SolverOptions { guard: opts.guard.max(kd + 10), ..opts.clone() };
        let spectrum = lowest_spectrum(&bundle, count, &opts)?;
        let clusters = levels::clusters_of(&spectrum, m_max)?;
        Ok(Self { bundle, spectrum, clusters })
    }

    pub fn k(&self) -> u32 {
        self.bundle.k()
    }

    pub fn projector(&self, m: usize) -> Result<LandauProjector> {
        let c = self
            .clusters
            .get(m)
            .ok_or(Error::IndexOutOfRange { index: m, n: self.clusters.len() })?;
        Ok(LandauProjector::from_cluster(&self.spectrum, c))
    }
}
