//! Spectral clusters `Σ_{m,k}` and the level spaces they span.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::eigen::SpectralDecomposition;
use crate::error::{Error, Result};

/// Members closer than this to an interval endpoint (after `k⁻¹` scaling)
/// flag their cluster.
pub const BOUNDARY_MARGIN: f64 = 0.05;

/// Smallest distance of the spectrum from `½` accepted by [`sharpen_projector`].
pub const MIN_SHARPEN_GAP: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct Cluster {
    pub m: usize,
    /// positions in the ascending eigenvalue list
    pub start: usize,
    pub dim: usize,
    /// mean of `λ/k` over the cluster
    pub center: f64,
    pub spread: f64,
    pub touches_boundary: bool,
}

impl Cluster {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.dim
    }
}

/// Level index of a scaled eigenvalue `s = λ/k` for real dimension `2n`.
pub fn level_of(s: f64, n: usize) -> usize {
    let base = n as f64 / 2.0;
    if s <= base + 0.5 {
        0
    } else {
        (s - base + 0.5).floor() as usize
    }
}

/// Partitions the scaled spectrum into `Σ_0, …, Σ_{m_max}`.
pub fn detect_clusters(scaled: &[f64], n: usize, m_max: usize) -> Result<Vec<Cluster>> {
    let base = n as f64 / 2.0;
    let needed = base + m_max as f64 + 0.5;
    let highest = scaled.last().copied().unwrap_or(f64::NEG_INFINITY);
    if !(highest > needed) {
        return Err(Error::IncompleteCoverage { level: m_max, highest, needed });
    }
    let mut out = Vec::with_capacity(m_max + 1);
    let mut pos = 0;
    for m in 0..=m_max {
        let start = pos;
        while pos < scaled.len() && level_of(scaled[pos], n) == m {
            pos += 1;
        }
        let members = &scaled[start..pos];
        let (lo, hi) = if m == 0 { (0.0, base + 0.5) } else { (base + m as f64 - 0.5, base + m as f64 + 0.5) };
        let touches = members
            .iter()
            .any(|&s| (s - lo).abs() < BOUNDARY_MARGIN || (hi - s).abs() < BOUNDARY_MARGIN);
        let dim = members.len();
        let center = if dim == 0 { f64::NAN } else { members.iter().sum::<f64>() / dim as f64 };
        let spread = members.last().zip(members.first()).map_or(0.0, |(a, b)| a - b);
        out.push(Cluster { m, start, dim, center, spread, touches_boundary: touches });
    }
    Ok(out)
}

pub fn clusters_of(spec: &SpectralDecomposition, m_max: usize) -> Result<Vec<Cluster>> {
    detect_clusters(&spec.scaled(), 1, m_max)
}

/// Orthonormal basis of `H_{m,k}` (unit Euclidean columns).
#[derive(Clone, Debug)]
pub struct LandauProjector {
    pub m: usize,
    pub k: u32,
    pub n: usize,
    pub h: f64,
    pub basis: DMatrix<Complex64>,
}

impl LandauProjector {
    pub fn from_cluster(spec: &SpectralDecomposition, cluster: &Cluster) -> Self {
        Self {
            m: cluster.m,
            k: spec.k,
            n: spec.n,
            h: spec.h,
            basis: spec.vectors.columns(cluster.start, cluster.dim).into_owned(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn gram_defect(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis;
        let id = DMatrix::<Complex64>::identity(g.nrows(), g.ncols());
        (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖P² − P‖` for `P = BB*`, read off the Gram matrix of `B`.
    pub fn idempotency_defect(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis;
        g.symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|l| (l * (l - 1.0)).abs())
            .fold(0.0, f64::max)
    }

    /// Orthogonal projection of a grid vector onto the level.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(v);
        let c = self.basis.adjoint() * &v;
        (&self.basis * c).as_slice().to_vec()
    }

    /// `Π(x, y)` between grid sites, normalized as a kernel for the measure `dx dy`.
    pub fn kernel(&self, x: usize, y: usize) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for c in 0..self.dim() {
            s += self.basis[(x, c)] * self.basis[(y, c)].conj();
        }
        s / (self.h * self.h)
    }
}

#[derive(Clone, Debug)]
pub struct Sharpened {
    pub matrix: DMatrix<Complex64>,
    pub rank: usize,
    /// `min |λ − ½|` over the spectrum of the input
    pub gap: f64,
}

/// `χ(P)` with `χ = 1` on `[½, ∞)` and `0` below.
pub fn sharpen_projector(p: &DMatrix<Complex64>) -> Result<Sharpened> {
    if p.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch { expected: p.nrows(), got: p.ncols() });
    }
    let herm = (p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let gap = eig.eigenvalues.iter().map(|l| (l - 0.5).abs()).fold(f64::INFINITY, f64::min);
    if gap < MIN_SHARPEN_GAP {
        return Err(Error::GapTooSmall { gap, min_gap: MIN_SHARPEN_GAP });
    }
    let n = p.nrows();
    let mut out = DMatrix::zeros(n, n);
    let mut rank = 0;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l >= 0.5 {
            let v = eig.eigenvectors.column(i);
            out += v * v.adjoint();
            rank += 1;
        }
    }
    Ok(Sharpened { matrix: out, rank, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_projector(n: usize, r: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let a = DMatrix::from_fn(n, r, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = a.qr().q();
        &q * q.adjoint()
    }

    #[test]
    fn levels_partition_the_line() {
        assert_eq!(level_of(0.5, 1), 0);
        assert_eq!(level_of(1.0, 1), 0);
        assert_eq!(level_of(1.0001, 1), 1);
        assert_eq!(level_of(2.49, 1), 2);
        assert_eq!(level_of(1.5, 2), 0);
        assert_eq!(level_of(2.0, 2), 1);
    }

    #[test]
    fn clusters_and_coverage() {
        let s = [0.49, 0.5, 1.48, 1.52, 2.5, 2.51, 3.4];
        let c = detect_clusters(&s, 1, 2).unwrap();
        assert_eq!(c.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert!((c[1].center - 1.5).abs() < 1e-12);
        assert!(matches!(detect_clusters(&s[..6], 1, 2), Err(Error::IncompleteCoverage { .. })));
        let edge = [0.98, 1.6, 2.5, 3.6];
        assert!(detect_clusters(&edge, 1, 2).unwrap()[0].touches_boundary);
    }

    #[test]
    fn sharpen_keeps_projectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_projector(12, 5, &mut rng);
        let s = sharpen_projector(&p).unwrap();
        assert_eq!(s.rank, 5);
        assert!((&s.matrix - &p).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sharpen_restores_rank_after_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_projector(12, 4, &mut rng);
        let e = DMatrix::from_fn(12, 12, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let e = (&e + e.adjoint()) * Complex64::new(0.005, 0.0);
        let s = sharpen_projector(&(&p + e)).unwrap();
        assert_eq!(s.rank, 4);
        let sq = &s.matrix * &s.matrix - &s.matrix;
        assert!(sq.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sharpen_edge_cases() {
        let below = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(0.4, 0.0);
        let s = sharpen_projector(&below).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.matrix.iter().all(|z| z.norm() == 0.0));
        let half = DMatrix::<Complex64>::identity(3, 3) * Complex64::new(0.5, 0.0);
        assert!(matches!(sharpen_projector(&half), Err(Error::GapTooSmall { .. })));
    }
}
