//! Peierls discretization of `L^k` over the flat torus `ℝ²/ΛℤΛ`.
//!
//! Landau gauge `A = k x dy`, so `∇_x = ∂_x` and `∇_y = ∂_y − ikx`. Sections
//! satisfy `ψ(x + Λ, y) = e^{ikΛy} ψ(x, y)`, which is consistent because
//! `kΛ² = 2πkd`. Link variables are `U_e = exp(i∫_e A)` and the covariant
//! forward difference along `e` is `(Ū_e ψ(head) − ψ(tail))/h`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest flux per plaquette accepted by [`DiscreteBundle::new`].
pub const MAX_PLAQUETTE_FLUX: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGeometry {
    /// degree of `L`, i.e. `∫ω/2π`
    pub d: u32,
}

impl TorusGeometry {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("degree d must be positive".into()));
        }
        Ok(Self { d })
    }

    /// `Λ = √(2πd)`
    pub fn side(&self) -> f64 {
        (2.0 * std::f64::consts::PI * self.d as f64).sqrt()
    }

    pub fn area(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.d as f64
    }

    /// Smallest `N` with `k h² ≤ limit`.
    pub fn required_n(&self, k: u32, limit: f64) -> usize {
        ((k as f64 * self.area() / limit).sqrt()).ceil() as usize
    }
}

/// Grid sections: `values[j * n + i]` sits at `(i h, j h)`.
#[derive(Clone, Debug)]
pub struct DiscreteBundle {
    geom: TorusGeometry,
    k: u32,
    n: usize,
    h: f64,
    /// `U_x` on the seam `i = N−1 → 0`, indexed by `j`; interior x-links are 1
    seam: Vec<Complex64>,
    /// `U_y` at column `i`
    uy: Vec<Complex64>,
}

impl DiscreteBundle {
    /// Rejects grids whose flux per plaquette `k h²` exceeds [`MAX_PLAQUETTE_FLUX`].
    pub fn new(geom: TorusGeometry, k: u32, n: usize) -> Result<Self> {
        Self::with_limit(geom, k, n, MAX_PLAQUETTE_FLUX)
    }

    pub fn with_limit(geom: TorusGeometry, k: u32, n: usize, limit: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidArgument(format!("grid needs N >= 4, got {n}")));
        }
        let lam = geom.side();
        let h = lam / n as f64;
        let flux = k as f64 * h * h;
        if flux > limit {
            return Err(Error::Resolution {
                flux,
                limit,
                required_n: geom.required_n(k, limit),
            });
        }
        let kf = k as f64;
        let seam = (0..n)
            .map(|j| Complex64::from_polar(1.0, -kf * lam * (j as f64 * h)))
            .collect();
        let uy = (0..n)
            .map(|i| Complex64::from_polar(1.0, kf * (i as f64 * h) * h))
            .collect();
        Ok(Self { geom, k, n, h, seam, uy })
    }

    pub fn geometry(&self) -> TorusGeometry {
        self.geom
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// `k h²`
    pub fn plaquette_flux(&self) -> f64 {
        self.k as f64 * self.h * self.h
    }

    /// Gershgorin bound `4/h²` on the spectrum of the Laplacian.
    pub fn spectral_bound(&self) -> f64 {
        4.0 / (self.h * self.h)
    }

    pub fn point(&self, idx: usize) -> (f64, f64) {
        ((idx % self.n) as f64 * self.h, (idx / self.n) as f64 * self.h)
    }

    pub fn ux(&self, i: usize, j: usize) -> Complex64 {
        if i + 1 == self.n {
            self.seam[j]
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    pub fn uy(&self, i: usize, _j: usize) -> Complex64 {
        self.uy[i]
    }

    /// Product of the link variables around every plaquette, counterclockwise.
    pub fn plaquette_holonomies(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let ip = (i + 1) % n;
                let jp = (j + 1) % n;
                out.push(self.ux(i, j) * self.uy(ip, j) * self.ux(i, jp).conj() * self.uy(i, j).conj());
            }
        }
        out
    }

    /// `Δ_k ψ = (1/2h²)(4ψ − Σ_neighbours Ū ψ(neighbour))`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.n;
        let s = 0.5 / (self.h * self.h);
        y.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let jp = (j + 1) % n;
            let jm = (j + n - 1) % n;
            for (i, out) in row.iter_mut().enumerate() {
                let ip = (i + 1) % n;
                let im = (i + n - 1) % n;
                let c = x[j * n + i];
                let right = self.ux(i, j).conj() * x[j * n + ip];
                let left = self.ux(im, j) * x[j * n + im];
                let up = self.uy[i].conj() * x[jp * n + i];
                let down = self.uy[i] * x[jm * n + i];
                *out = (c * 4.0 - right - left - up - down) * s;
            }
        });
    }

    /// Centered covariant derivative along `x`.
    pub fn nabla_x(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let s = 0.5 / self.h;
        let mut y = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                let ip = (i + 1) % n;
                let im = (i + n - 1) % n;
                y[j * n + i] = (self.ux(i, j).conj() * x[j * n + ip] - self.ux(im, j) * x[j * n + im]) * s;
            }
        }
        y
    }

    /// Centered covariant derivative along `y`.
    pub fn nabla_y(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let s = 0.5 / self.h;
        let mut y = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let jp = (j + 1) % n;
            let jm = (j + n - 1) % n;
            for i in 0..n {
                y[j * n + i] = (self.uy[i].conj() * x[jp * n + i] - self.uy[i] * x[jm * n + i]) * s;
            }
        }
        y
    }

    /// Forward covariant differences along `x` and `y`.
    pub fn nabla_forward(&self, x: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let s = 1.0 / self.h;
        let mut dx = vec![Complex64::new(0.0, 0.0); n * n];
        let mut dy = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let jp = (j + 1) % n;
            for i in 0..n {
                let ip = (i + 1) % n;
                let c = x[j * n + i];
                dx[j * n + i] = (self.ux(i, j).conj() * x[j * n + ip] - c) * s;
                dy[j * n + i] = (self.uy[i].conj() * x[jp * n + i] - c) * s;
            }
        }
        (dx, dy)
    }

    /// Backward covariant differences, the negative adjoints of the forward ones.
    pub fn nabla_backward(&self, x: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let s = 1.0 / self.h;
        let mut dx = vec![Complex64::new(0.0, 0.0); n * n];
        let mut dy = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let jm = (j + n - 1) % n;
            for i in 0..n {
                let im = (i + n - 1) % n;
                let c = x[j * n + i];
                dx[j * n + i] = (c - self.ux(im, j) * x[j * n + im]) * s;
                dy[j * n + i] = (c - self.uy[i] * x[jm * n + i]) * s;
            }
        }
        (dx, dy)
    }

    /// Dense matrix of the Laplacian, for small grids and tests.
    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            e[c] = Complex64::new(1.0, 0.0);
            self.apply(&e, &mut col);
            for r in 0..dim {
                m[(r, c)] = col[r];
            }
            e[c] = Complex64::new(0.0, 0.0);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plaquettes_carry_uniform_flux() {
        let g = TorusGeometry::new(2).unwrap();
        let b = DiscreteBundle::new(g, 5, 24).unwrap();
        let expected = Complex64::from_polar(1.0, b.plaquette_flux());
        for (p, hol) in b.plaquette_holonomies().iter().enumerate() {
            assert!((hol - expected).norm() < 1e-12, "plaquette {p}: {hol}");
        }
        let total: f64 = b.plaquette_holonomies().iter().map(|z| z.arg()).sum();
        assert!((total - 2.0 * std::f64::consts::PI * 10.0).abs() < 1e-9);
    }

    #[test]
    fn laplacian_is_hermitian() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 3, 10).unwrap();
        let m = b.to_dense();
        let worst = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst <= 1e-13);
    }

    #[test]
    fn resolution_guard_names_grid() {
        let g = TorusGeometry::new(1).unwrap();
        match DiscreteBundle::new(g, 40, 16) {
            Err(Error::Resolution { required_n, .. }) => {
                assert!(DiscreteBundle::new(g, 40, required_n).is_ok());
            }
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn forward_and_backward_differences_are_adjoint() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 2, 8).unwrap();
        let dim = b.dim();
        let u: Vec<Complex64> = (0..dim).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let v: Vec<Complex64> = (0..dim).map(|i| Complex64::new((i as f64 * 0.7).cos(), (i as f64).sin())).collect();
        let (fx, _) = b.nabla_forward(&u);
        let (bx, _) = b.nabla_backward(&v);
        let lhs: Complex64 = fx.iter().zip(&v).map(|(a, b)| a * b.conj()).sum();
        let rhs: Complex64 = u.iter().zip(&bx).map(|(a, b)| -a * b.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-10);
    }
}
