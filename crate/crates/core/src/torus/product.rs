//! The flat four-torus `T²_{d₁} × T²_{d₂}` from two solved factors.
//!
//! Eigenvalues add, so the level-`m` space of the product is the sum over
//! `a + b = m` of tensor products of factor levels.

use serde::Serialize;

use super::eigen::SpectralDecomposition;
use super::levels::{detect_clusters, Cluster};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ProductClusters {
    pub k: u32,
    pub clusters: Vec<Cluster>,
}

pub fn tensor_clusters(a: &SpectralDecomposition, b: &SpectralDecomposition, m_max: usize) -> Result<ProductClusters> {
    if a.k != b.k {
        return Err(Error::InvalidArgument(format!("factors solved at k = {} and {}", a.k, b.k)));
    }
    let sa = a.scaled();
    let sb = b.scaled();
    let (lo_a, hi_a) = (sa[0], *sa.last().unwrap());
    let (lo_b, hi_b) = (sb[0], *sb.last().unwrap());
    // every sum below this bound has both summands in the computed lists
    let complete = (hi_a + lo_b).min(hi_b + lo_a);
    let mut sums: Vec<f64> = sa
        .iter()
        .flat_map(|x| sb.iter().map(move |y| x + y))
        .filter(|&s| s <= complete)
        .collect();
    sums.sort_by(f64::total_cmp);
    let clusters = detect_clusters(&sums, 2, m_max)?;
    Ok(ProductClusters { k: a.k, clusters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann_roch::dim_torus;
    use crate::torus::{SolverOptions, TorusGeometry, TorusModel};

    #[test]
    fn product_dimensions() {
        let opts = SolverOptions::default();
        let k = 3;
        let a = TorusModel::solve(TorusGeometry::new(1).unwrap(), k, 30, 2, 0.3, &opts).unwrap();
        let b = TorusModel::solve(TorusGeometry::new(2).unwrap(), k, 36, 2, 0.3, &opts).unwrap();
        let p = tensor_clusters(&a.spectrum, &b.spectrum, 1).unwrap();
        for c in &p.clusters {
            assert_eq!(c.dim as i128, dim_torus(2, k as u64, &[1, 2], c.m as u32).unwrap());
        }
    }
}
