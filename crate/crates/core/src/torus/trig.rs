//! Trigonometric polynomials on the torus and vector fields with such
//! coefficients.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `Σ c_{pq} e^{2πi(px + qy)/Λ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    side: f64,
    modes: BTreeMap<(i32, i32), Complex64>,
}

impl TrigPoly {
    pub fn zero(side: f64) -> Self {
        Self { side, modes: BTreeMap::new() }
    }

    pub fn constant(side: f64, c: Complex64) -> Self {
        let mut t = Self::zero(side);
        t.push((0, 0), c);
        t
    }

    pub fn mode(side: f64, p: i32, q: i32, c: Complex64) -> Self {
        let mut t = Self::zero(side);
        t.push((p, q), c);
        t
    }

    /// Builds from angular frequencies `(ω_x, ω_y)`, which must be integer
    /// multiples of `2π/Λ`.
    pub fn from_frequencies(side: f64, terms: &[(f64, f64, Complex64)]) -> Result<Self> {
        let unit = 2.0 * PI / side;
        let mut t = Self::zero(side);
        for &(wx, wy, c) in terms {
            let (p, q) = (wx / unit, wy / unit);
            if (p - p.round()).abs() > 1e-9 || (q - q.round()).abs() > 1e-9 {
                return Err(Error::NotPeriodic(format!(
                    "frequency ({wx}, {wy}) is not a multiple of 2π/Λ = {unit}"
                )));
            }
            t.push((p.round() as i32, q.round() as i32), c);
        }
        Ok(t)
    }

    pub fn cos_x(side: f64, p: i32) -> Self {
        let h = Complex64::new(0.5, 0.0);
        let mut t = Self::mode(side, p, 0, h);
        t.push((-p, 0), h);
        t
    }

    pub fn sin_x(side: f64, p: i32) -> Self {
        let mut t = Self::mode(side, p, 0, Complex64::new(0.0, -0.5));
        t.push((-p, 0), Complex64::new(0.0, 0.5));
        t
    }

    pub fn cos_y(side: f64, q: i32) -> Self {
        Self::cos_x(side, q).swap_axes()
    }

    pub fn sin_y(side: f64, q: i32) -> Self {
        Self::sin_x(side, q).swap_axes()
    }

    /// Parses `1`, `cosx`, `sin2y`, … as used on the command line.
    pub fn parse(side: f64, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(c) = s.parse::<f64>() {
            return Ok(Self::constant(side, Complex64::new(c, 0.0)));
        }
        let bad = || Error::InvalidArgument(format!("cannot parse trigonometric polynomial '{s}'"));
        let (kind, rest) = s.split_at(s.len().min(3));
        let axis = rest.chars().last().ok_or_else(bad)?;
        let freq = &rest[..rest.len() - 1];
        let p: i32 = if freq.is_empty() { 1 } else { freq.parse().map_err(|_| bad())? };
        match (kind, axis) {
            ("cos", 'x') => Ok(Self::cos_x(side, p)),
            ("sin", 'x') => Ok(Self::sin_x(side, p)),
            ("cos", 'y') => Ok(Self::cos_y(side, p)),
            ("sin", 'y') => Ok(Self::sin_y(side, p)),
            _ => Err(bad()),
        }
    }

    fn swap_axes(self) -> Self {
        Self {
            side: self.side,
            modes: self.modes.into_iter().map(|((p, q), c)| ((q, p), c)).collect(),
        }
    }

    fn push(&mut self, key: (i32, i32), c: Complex64) {
        let e = self.modes.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if e.norm() == 0.0 {
            self.modes.remove(&key);
        }
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn modes(&self) -> impl Iterator<Item = (&(i32, i32), &Complex64)> {
        self.modes.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.modes.values().all(|c| c.norm() < 1e-15)
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let u = 2.0 * PI / self.side;
        self.modes
            .iter()
            .map(|(&(p, q), c)| c * Complex64::from_polar(1.0, u * (p as f64 * x + q as f64 * y)))
            .sum()
    }

    /// Mean over the torus.
    pub fn mean(&self) -> Complex64 {
        self.modes.get(&(0, 0)).copied().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.clone();
        for (&k, &c) in &o.modes {
            t.push(k, c);
        }
        t
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut t = Self::zero(self.side);
        for (&k, &c) in &self.modes {
            t.push(k, c * s);
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t = Self::zero(self.side);
        for (&(p, q), &a) in &self.modes {
            for (&(r, s), &b) in &o.modes {
                t.push((p + r, q + s), a * b);
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Self {
            side: self.side,
            modes: self.modes.iter().map(|(&(p, q), c)| ((-p, -q), c.conj())).collect(),
        }
    }

    pub fn dx(&self) -> Self {
        let u = 2.0 * PI / self.side;
        let mut t = Self::zero(self.side);
        for (&(p, q), &c) in &self.modes {
            t.push((p, q), c * Complex64::new(0.0, u * p as f64));
        }
        t
    }

    pub fn dy(&self) -> Self {
        let u = 2.0 * PI / self.side;
        let mut t = Self::zero(self.side);
        for (&(p, q), &c) in &self.modes {
            t.push((p, q), c * Complex64::new(0.0, u * q as f64));
        }
        t
    }

    /// `sup |f|` sampled on a `res × res` grid.
    pub fn sup_norm(&self, res: usize) -> f64 {
        let h = self.side / res as f64;
        let mut best: f64 = 0.0;
        for j in 0..res {
            for i in 0..res {
                best = best.max(self.eval(i as f64 * h, j as f64 * h).norm());
            }
        }
        best
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .modes
            .iter()
            .map(|(&(p, q), c)| format!("({:.4}{:+.4}i)e[{p},{q}]", c.re, c.im))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `X = X^x ∂_x + X^y ∂_y` with trigonometric coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub x: TrigPoly,
    pub y: TrigPoly,
}

impl VectorField {
    pub fn constant(side: f64, a: f64, b: f64) -> Self {
        Self {
            x: TrigPoly::constant(side, Complex64::new(a, 0.0)),
            y: TrigPoly::constant(side, Complex64::new(b, 0.0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `X(f)`
    pub fn apply(&self, f: &TrigPoly) -> TrigPoly {
        self.x.mul(&f.dx()).add(&self.y.mul(&f.dy()))
    }

    /// Euclidean metric `g(X, Y)`.
    pub fn metric(&self, o: &Self) -> TrigPoly {
        self.x.mul(&o.x).add(&self.y.mul(&o.y))
    }

    /// `ω(X, Y)` for `ω = dx∧dy`.
    pub fn omega(&self, o: &Self) -> TrigPoly {
        self.x.mul(&o.y).add(&self.y.mul(&o.x).scale(Complex64::new(-1.0, 0.0)))
    }
}

/// Solves `ω(X, ·) + df = 0`: `X_f = −∂_y f ∂_x + ∂_x f ∂_y`.
pub fn hamiltonian_vf(f: &TrigPoly) -> VectorField {
    VectorField { x: f.dy().scale(Complex64::new(-1.0, 0.0)), y: f.dx() }
}

/// `{f, g} = ω(X_f, X_g) = X_f(g)`.
pub fn poisson(f: &TrigPoly, g: &TrigPoly) -> TrigPoly {
    hamiltonian_vf(f).apply(g)
}

/// `B₁(f, g) = −(½ + m) g(X, Y) + (1/2i) ω(X, Y)` with `X, Y` the Hamiltonian
/// fields of `f, g`.
pub fn b1(f: &TrigPoly, g: &TrigPoly, m: usize) -> TrigPoly {
    let x = hamiltonian_vf(f);
    let y = hamiltonian_vf(g);
    x.metric(&y)
        .scale(Complex64::new(-(0.5 + m as f64), 0.0))
        .add(&x.omega(&y).scale(Complex64::new(0.0, -0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: f64 = 2.5066282746310002; // √(2π)

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn trig_values() {
        let f = TrigPoly::cos_x(L, 1);
        let g = TrigPoly::sin_y(L, 1);
        let (x, y) = (0.3, 1.1);
        let u = 2.0 * PI / L;
        assert!(close(f.eval(x, y), Complex64::new((u * x).cos(), 0.0)));
        assert!(close(g.eval(x, y), Complex64::new((u * y).sin(), 0.0)));
        assert!(close(f.mul(&g).eval(x, y), Complex64::new((u * x).cos() * (u * y).sin(), 0.0)));
        assert!(close(f.dx().eval(x, y), Complex64::new(-u * (u * x).sin(), 0.0)));
        assert!((f.sup_norm(64) - 1.0).abs() < 1e-12);
        assert_eq!(TrigPoly::parse(L, "cos2x").unwrap(), TrigPoly::cos_x(L, 2));
        assert!(TrigPoly::parse(L, "tanx").is_err());
    }

    #[test]
    fn periodicity_is_enforced() {
        let u = 2.0 * PI / L;
        assert!(TrigPoly::from_frequencies(L, &[(u, 0.0, Complex64::new(1.0, 0.0))]).is_ok());
        assert!(matches!(
            TrigPoly::from_frequencies(L, &[(1.0, 0.0, Complex64::new(1.0, 0.0))]),
            Err(Error::NotPeriodic(_))
        ));
    }

    #[test]
    fn hamiltonian_sign() {
        // locally f = x gives X_f = ∂_y
        let f = TrigPoly::sin_x(L, 1);
        let xf = hamiltonian_vf(&f);
        assert!(xf.x.is_zero());
        assert!(close(xf.y.eval(0.0, 0.7), Complex64::new(2.0 * PI / L, 0.0)));
        // ω(X_f, ·) = −df
        let probe = VectorField::constant(L, 0.3, -1.2);
        let lhs = xf.omega(&probe);
        let rhs = probe.apply(&f).scale(Complex64::new(-1.0, 0.0));
        for (x, y) in [(0.1, 0.2), (1.3, 0.4)] {
            assert!(close(lhs.eval(x, y), rhs.eval(x, y)));
        }
        assert!(hamiltonian_vf(&TrigPoly::constant(L, Complex64::new(3.0, 0.0))).is_zero());
    }

    #[test]
    fn poisson_is_antisymmetric() {
        let f = TrigPoly::cos_x(L, 1).add(&TrigPoly::sin_y(L, 2));
        let g = TrigPoly::sin_x(L, 1).mul(&TrigPoly::cos_y(L, 1));
        let s = poisson(&f, &g).add(&poisson(&g, &f));
        assert!(s.is_zero());
        let h = hamiltonian_vf(&f).omega(&hamiltonian_vf(&g));
        assert_eq!(h, poisson(&f, &g));
    }

    #[test]
    fn b1_for_benchmark_pair() {
        let f = TrigPoly::cos_x(L, 1);
        let g = TrigPoly::sin_y(L, 1);
        let b = b1(&f, &g, 0);
        let expected = f.dx().mul(&g.dy()).scale(Complex64::new(0.0, -0.5));
        assert_eq!(b, expected);
    }
}
