//! Lowest eigenpairs of the discrete magnetic Laplacian.
//!
//! Chebyshev-filtered subspace iteration: each sweep damps the part of the
//! block lying above the current Ritz cut-off, then a Rayleigh-Ritz step on
//! the filtered block. Small grids go straight to a dense Hermitian solver.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bundle::DiscreteBundle;
use crate::error::{Error, Result};

/// Grids with at most this many unknowns use the dense solver.
pub const DENSE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// residual bound relative to the spectral bound `4/h²`
    pub tol: f64,
    pub max_iter: usize,
    pub degree: usize,
    /// extra block vectors beyond the requested count; should exceed the
    /// multiplicity of the eigenvalue just above the wanted ones
    pub guard: usize,
    pub seed: u64,
    /// largest admissible `count / dim`
    pub max_fraction: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 200, degree: 40, guard: 10, seed: 0x5eed, max_fraction: 0.5 }
    }
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub k: u32,
    pub n: usize,
    pub h: f64,
    pub eigenvalues: Vec<f64>,
    /// columns are eigenvectors with unit Euclidean norm; divide by `h` for
    /// grid functions normalized with weight `h²`
    pub vectors: DMatrix<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub dense: bool,
}

impl SpectralDecomposition {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn scaled(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l / self.k.max(1) as f64).collect()
    }
}

pub(crate) fn apply_block(b: &DiscreteBundle, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = x.nrows();
    let mut y = DMatrix::zeros(dim, x.ncols());
    let xs = x.as_slice();
    let ys = y.as_mut_slice();
    for (xc, yc) in xs.chunks(dim).zip(ys.chunks_mut(dim)) {
        b.apply(xc, yc);
    }
    y
}

fn orthonormalize(x: DMatrix<Complex64>) -> DMatrix<Complex64> {
    x.qr().q()
}

struct Ritz {
    values: Vec<f64>,
    x: DMatrix<Complex64>,
    hx: DMatrix<Complex64>,
}

fn rayleigh_ritz(b: &DiscreteBundle, x: DMatrix<Complex64>) -> Ritz {
    let hx = apply_block(b, &x);
    let g = x.adjoint() * &hx;
    let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = g.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let v = DMatrix::from_fn(order.len(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ritz {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        x: &x * &v,
        hx: &hx * &v,
    }
}

fn residuals(r: &Ritz, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let th = Complex64::new(r.values[i], 0.0);
            (r.hx.column(i) - r.x.column(i) * th).norm()
        })
        .collect()
}

/// Scaled Chebyshev filter damping `[a, b]` relative to the point `a0`.
fn filter(bundle: &DiscreteBundle, x: &DMatrix<Complex64>, degree: usize, a: f64, b: f64, a0: f64) -> DMatrix<Complex64> {
    let e = (b - a) / 2.0;
    let c = (b + a) / 2.0;
    let mut sigma = e / (a0 - c);
    let tau = 2.0 / sigma;
    let mut prev = x.clone();
    let mut y = apply_block(bundle, x);
    let s = sigma / e;
    for (yv, xv) in y.iter_mut().zip(x.iter()) {
        *yv = (*yv - xv * c) * s;
    }
    for _ in 1..degree {
        let sigma_new = 1.0 / (tau - sigma);
        let hy = apply_block(bundle, &y);
        let s1 = 2.0 * sigma_new / e;
        let s2 = sigma * sigma_new;
        let mut next = hy;
        for ((nv, yv), pv) in next.iter_mut().zip(y.iter()).zip(prev.iter()) {
            *nv = (*nv - yv * c) * s1 - pv * s2;
        }
        prev = std::mem::replace(&mut y, next);
        sigma = sigma_new;
    }
    y
}

fn dense(bundle: &DiscreteBundle, count: usize) -> SpectralDecomposition {
    let m = bundle.to_dense();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    order.truncate(count);
    let vectors = DMatrix::from_fn(m.nrows(), count, |r, c| eig.eigenvectors[(r, order[c])]);
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let hv = &m * &vectors;
    let residuals = (0..count)
        .map(|i| (hv.column(i) - vectors.column(i) * Complex64::new(eigenvalues[i], 0.0)).norm())
        .collect();
    SpectralDecomposition {
        k: bundle.k(),
        n: bundle.n(),
        h: bundle.h(),
        eigenvalues,
        vectors,
        residuals,
        iterations: 0,
        dense: true,
    }
}

/// The `count` lowest eigenpairs with `‖Hv − λv‖ ≤ tol · 4/h²`.
pub fn lowest_spectrum(bundle: &DiscreteBundle, count: usize, opts: &SolverOptions) -> Result<SpectralDecomposition> {
    let dim = bundle.dim();
    if count == 0 || count as f64 > opts.max_fraction * dim as f64 {
        return Err(Error::InvalidArgument(format!(
            "count {count} must lie in 1..={} for a grid of {dim} points",
            (opts.max_fraction * dim as f64) as usize
        )));
    }
    let bound = bundle.spectral_bound();
    let target = opts.tol * bound;
    if dim <= DENSE_LIMIT {
        let out = dense(bundle, count);
        return check(out, target, 0);
    }
    let p = (count + opts.guard).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x0 = DMatrix::from_fn(dim, p, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut ritz = rayleigh_ritz(bundle, orthonormalize(x0));
    let mut res = residuals(&ritz, count);
    let mut it = 0;
    while it < opts.max_iter && res.iter().any(|&r| r > target) {
        let a = ritz.values[p - 1];
        let a0 = ritz.values[0];
        let y = filter(bundle, &ritz.x, opts.degree, a, bound, a0);
        ritz = rayleigh_ritz(bundle, orthonormalize(y));
        res = residuals(&ritz, count);
        it += 1;
    }
    let out = SpectralDecomposition {
        k: bundle.k(),
        n: bundle.n(),
        h: bundle.h(),
        eigenvalues: ritz.values[..count].to_vec(),
        vectors: ritz.x.columns(0, count).into_owned(),
        residuals: res,
        iterations: it,
        dense: false,
    };
    check(out, target, it)
}

fn check(out: SpectralDecomposition, target: f64, iterations: usize) -> Result<SpectralDecomposition> {
    let worst = out.max_residual();
    if worst > target {
        return Err(Error::NoConvergence { iterations, residual: worst });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::bundle::TorusGeometry;

    #[test]
    fn zero_field_has_constant_ground_state() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 0, 12).unwrap();
        let s = lowest_spectrum(&b, 3, &SolverOptions::default()).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-10);
        assert!(s.eigenvalues[1] > 1e-3, "ground state must be simple");
        let v = s.vectors.column(0);
        let phase = v[0] / v[0].norm();
        for z in v.iter() {
            assert!((z / phase - v[0].norm()).norm() < 1e-8);
        }
    }

    #[test]
    fn iterative_matches_dense() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 2, 36).unwrap();
        let d = dense(&b, 8);
        let s = lowest_spectrum(&b, 8, &SolverOptions::default()).unwrap();
        assert!(!s.dense);
        for (x, y) in d.eigenvalues.iter().zip(&s.eigenvalues) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 2, 36).unwrap();
        let o = SolverOptions::default();
        let s1 = lowest_spectrum(&b, 6, &o).unwrap();
        let s2 = lowest_spectrum(&b, 6, &o).unwrap();
        assert_eq!(s1.eigenvalues, s2.eigenvalues);
    }

    #[test]
    fn rejects_oversized_request() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 1, 8).unwrap();
        assert!(lowest_spectrum(&b, 60, &SolverOptions::default()).is_err());
    }
}
