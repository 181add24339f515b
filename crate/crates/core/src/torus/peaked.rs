//! Sections peaked at a point: `Φ^f = (k/2π)^{1/2} e^{−k|ξ|²/4} f(√k z̄) ψ`
//! in the symmetric frame centred at `x₀`, with `z̄ = (ξ₁ − iξ₂)/√2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::bundle::DiscreteBundle;
use super::levels::LandauProjector;
use crate::error::{Error, Result};

/// `Σ c_a z̄^a`, with the Bargmann product `⟨z̄^a, z̄^b⟩ = a! δ_ab`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiHolomorphic(pub Vec<Complex64>);

impl AntiHolomorphic {
    pub fn monomial(a: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); a + 1];
        c[a] = Complex64::new(1.0, 0.0);
        Self(c)
    }

    pub fn eval(&self, zbar: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * zbar + c)
    }

    pub fn inner(&self, o: &Self) -> Complex64 {
        let mut fact = 1.0;
        let mut s = Complex64::new(0.0, 0.0);
        for (a, (x, y)) in self.0.iter().zip(&o.0).enumerate() {
            if a > 0 {
                fact *= a as f64;
            }
            s += x * y.conj() * fact;
        }
        s
    }

    /// Component in the level-`m` space, the degree-`m` part.
    pub fn level_part(&self, m: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); self.0.len().max(m + 1)];
        if let Some(v) = self.0.get(m) {
            c[m] = *v;
        }
        Self(c)
    }
}

/// Smooth cut-off equal to 1 on `r ≤ r1` and 0 on `r ≥ r2`.
pub fn bump(r: f64, r1: f64, r2: f64) -> f64 {
    let g = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    if r <= r1 {
        return 1.0;
    }
    if r >= r2 {
        return 0.0;
    }
    let s = (r - r1) / (r2 - r1);
    g(1.0 - s) / (g(1.0 - s) + g(s))
}

/// Grid values of `Φ^f` at `x₀`, Landau gauge; `Λ/4` support must fit in
/// the fundamental domain.
pub fn peaked_section(bundle: &DiscreteBundle, x0: (f64, f64), f: &AntiHolomorphic) -> Result<Vec<Complex64>> {
    let side = bundle.geometry().side();
    let r2 = side / 4.0;
    let r1 = side / 8.0;
    for c in [x0.0, x0.1] {
        if c < r2 || c > side - r2 {
            return Err(Error::ChartExceeded(format!(
                "point ({:.4}, {:.4}) needs a disc of radius {r2:.4} inside [0, {side:.4})²",
                x0.0, x0.1
            )));
        }
    }
    let kf = bundle.k() as f64;
    let amp = (kf / (2.0 * PI)).sqrt();
    Ok((0..bundle.dim())
        .map(|i| {
            let (x, y) = bundle.point(i);
            let (dx, dy) = (x - x0.0, y - x0.1);
            let r = (dx * dx + dy * dy).sqrt();
            let cut = bump(r, r1, r2);
            if cut == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let zbar = Complex64::new(dx, -dy) * (kf / 2.0).sqrt();
            let theta = kf * x0.0 * dy + 0.5 * kf * dx * dy;
            f.eval(zbar) * amp * (-kf * r * r / 4.0).exp() * cut * Complex64::from_polar(1.0, theta)
        })
        .collect())
}

/// `⟨u, v⟩ = h² Σ u v̄`
pub fn grid_inner(bundle: &DiscreteBundle, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let h2 = bundle.h() * bundle.h();
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum::<Complex64>() * h2
}

#[derive(Clone, Debug, Serialize)]
pub struct PeakedReport {
    pub k: u32,
    /// degrees of the monomials compared
    pub degrees: Vec<usize>,
    /// `|⟨Φ^f, Φ^g⟩ − ⟨f, g⟩|` row-major over `degrees × degrees`
    pub gram_errors: Vec<f64>,
    pub max_error: f64,
}

pub fn peaked_gram(bundle: &DiscreteBundle, x0: (f64, f64), degrees: &[usize]) -> Result<PeakedReport> {
    let polys: Vec<AntiHolomorphic> = degrees.iter().map(|&a| AntiHolomorphic::monomial(a)).collect();
    let sections = polys
        .iter()
        .map(|p| peaked_section(bundle, x0, p))
        .collect::<Result<Vec<_>>>()?;
    let mut errs = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        for (j, g) in polys.iter().enumerate() {
            errs.push((grid_inner(bundle, &sections[i], &sections[j]) - f.inner(g)).norm());
        }
    }
    Ok(PeakedReport {
        k: bundle.k(),
        degrees: degrees.to_vec(),
        max_error: errs.iter().cloned().fold(0.0, f64::max),
        gram_errors: errs,
    })
}

/// `‖Π_{m,k}Φ^f − Φ^{π_m f}‖`
pub fn level_error(bundle: &DiscreteBundle, proj: &LandauProjector, x0: (f64, f64), f: &AntiHolomorphic) -> Result<f64> {
    let phi = peaked_section(bundle, x0, f)?;
    let projected = proj.project(&phi);
    let target = peaked_section(bundle, x0, &f.level_part(proj.m))?;
    let diff: Vec<Complex64> = projected.iter().zip(&target).map(|(a, b)| a - b).collect();
    Ok(grid_inner(bundle, &diff, &diff).re.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::TorusGeometry;

    #[test]
    fn bump_profile() {
        assert_eq!(bump(0.1, 0.2, 0.4), 1.0);
        assert_eq!(bump(0.5, 0.2, 0.4), 0.0);
        assert!((bump(0.3, 0.2, 0.4) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bargmann_product() {
        let f = AntiHolomorphic(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert!((f.inner(&f).re - 9.0).abs() < 1e-14);
        assert_eq!(f.level_part(2), AntiHolomorphic(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)]));
    }

    #[test]
    fn norms_approach_bargmann_values() {
        let geom = TorusGeometry::new(4).unwrap();
        let c = geom.side() / 2.0;
        let err = |k: u32| {
            let b = DiscreteBundle::new(geom, k, 16 * k as usize).unwrap();
            peaked_gram(&b, (c, c), &[0, 1, 2]).unwrap().max_error
        };
        let (e4, e12) = (err(4), err(12));
        assert!(e12 < e4 / 3.0, "{e4} {e12}");
    }

    #[test]
    fn chart_guard() {
        let b = DiscreteBundle::new(TorusGeometry::new(1).unwrap(), 2, 32).unwrap();
        assert!(matches!(
            peaked_section(&b, (0.1, 1.0), &AntiHolomorphic::monomial(0)),
            Err(Error::ChartExceeded(_))
        ));
    }
}
