//! Multi-indices and exact polynomials in `(z, z̄)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exact::{factorial, Rational, Scalar};

/// Exponent vector `α ∈ ℕⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α(i)!`
    pub fn factorial(&self) -> i128 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn inc(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Self(v)
    }

    pub fn dec(&self, i: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(Self(v))
    }

    /// All multi-indices of length `n` and weight exactly `m`, in descending
    /// lexicographic order.
    pub fn of_weight(n: usize, m: u32) -> Vec<Self> {
        fn rec(n: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(m);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=m).rev() {
                prefix.push(first);
                rec(n, m - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, m, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `z^hol z̄^anti`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub hol: MultiIndex,
    pub anti: MultiIndex,
}

impl Monomial {
    pub fn new(hol: MultiIndex, anti: MultiIndex) -> Self {
        assert_eq!(hol.dim(), anti.dim());
        Self { hol, anti }
    }

    pub fn one(n: usize) -> Self {
        Self::new(MultiIndex::zeros(n), MultiIndex::zeros(n))
    }

    pub fn antiholomorphic(anti: MultiIndex) -> Self {
        let n = anti.dim();
        Self::new(MultiIndex::zeros(n), anti)
    }

    pub fn holomorphic(hol: MultiIndex) -> Self {
        let n = hol.dim();
        Self::new(hol, MultiIndex::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.hol.dim()
    }

    pub fn degree(&self) -> u32 {
        self.hol.degree() + self.anti.degree()
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.hol.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.hol.add(&other.hol), self.anti.add(&other.anti))
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (i, zi) in z.iter().enumerate() {
            acc *= zi.powu(self.hol.get(i)) * zi.conj().powu(self.anti.get(i));
        }
        acc
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.hol.entries().iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("z{}", i + 1)),
                _ => parts.push(format!("z{}^{}", i + 1, a)),
            }
        }
        for (i, &b) in self.anti.entries().iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(format!("zb{}", i + 1)),
                _ => parts.push(format!("zb{}^{}", i + 1, b)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Exact polynomial `Σ c_{ab} z^a z̄^b` on `ℂⁿ`. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyZZbar {
    n: usize,
    coeffs: BTreeMap<Monomial, Scalar>,
}

impl PolyZZbar {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.dim());
        p.add_term(m, &c);
        p
    }

    /// `z_i` (0-based index)
    pub fn z(n: usize, i: usize) -> Self {
        Self::monomial(Monomial::holomorphic(MultiIndex::unit(n, i)))
    }

    /// `z̄_i` (0-based index)
    pub fn zbar(n: usize, i: usize) -> Self {
        Self::monomial(Monomial::antiholomorphic(MultiIndex::unit(n, i)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Maximal `|a| + |b|` over stored terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(Monomial::degree).max()
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.coeffs.keys().all(Monomial::is_antiholomorphic)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.dim(), self.n);
        match self.coeffs.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.coeffs {
            let w = v * c;
            if !w.is_zero() {
                out.coeffs.insert(m.clone(), w);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// `∂/∂z_i`
    pub fn d_z(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.coeffs {
            if let Some(h) = m.hol.dec(i) {
                let k = m.hol.get(i) as i128;
                out.add_term(Monomial::new(h, m.anti.clone()), &(c * Scalar::from_int(k)));
            }
        }
        out
    }

    /// `∂/∂z̄_i`
    pub fn d_zbar(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.coeffs {
            if let Some(a) = m.anti.dec(i) {
                let k = m.anti.get(i) as i128;
                out.add_term(Monomial::new(m.hol.clone(), a), &(c * Scalar::from_int(k)));
            }
        }
        out
    }

    pub fn mul_z(&self, i: usize) -> Self {
        self.map_monomials(|m| Monomial::new(m.hol.inc(i), m.anti.clone()))
    }

    pub fn mul_zbar(&self, i: usize) -> Self {
        self.map_monomials(|m| Monomial::new(m.hol.clone(), m.anti.inc(i)))
    }

    fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(m, c)| (f(m), c.clone())).collect(),
        }
    }

    /// Value at the origin, `f(0)`.
    pub fn at_origin(&self) -> Scalar {
        self.coeff(&Monomial::one(self.n))
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(m, c)| c.to_c64() * m.eval(z))
            .sum()
    }

    /// Substitutes `z_i ↦ Σ_j hol_map[i][j]` and `z̄_i ↦ …` where the images
    /// are polynomials in a (possibly larger) variable set.
    pub fn substitute(&self, hol_map: &[PolyZZbar], anti_map: &[PolyZZbar], n_out: usize) -> PolyZZbar {
        let mut out = PolyZZbar::zero(n_out);
        for (m, c) in &self.coeffs {
            let mut t = PolyZZbar::constant(n_out, c.clone());
            for i in 0..self.n {
                t = t.mul(&hol_map[i].pow(m.hol.get(i)));
                t = t.mul(&anti_map[i].pow(m.anti.get(i)));
            }
            out = out.add(&t);
        }
        out
    }

    /// Maximum absolute difference of the coefficients, as floats.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other)
            .coeffs
            .values()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    }

    pub fn from_rational_terms(n: usize, terms: &[(Monomial, Rational)]) -> Self {
        let mut p = Self::zero(n);
        for (m, q) in terms {
            p.add_term(m.clone(), &Scalar::from_rational(*q));
        }
        p
    }
}

impl fmt::Display for PolyZZbar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_enumeration() {
        let w = MultiIndex::of_weight(2, 2);
        let v: Vec<Vec<u32>> = w.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(v, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(MultiIndex::of_weight(3, 3).len(), 10);
    }

    #[test]
    fn factorial_of_multi_index() {
        assert_eq!(MultiIndex::new(vec![3, 2]).factorial(), 12);
        assert_eq!(MultiIndex::new(vec![3, 2]).degree(), 5);
    }

    #[test]
    fn derivatives() {
        let zb = PolyZZbar::zbar(1, 0);
        let p = zb.pow(2);
        assert_eq!(p.d_zbar(0), zb.scale(&Scalar::from_int(2)));
        assert!(p.d_z(0).is_zero());
    }

    #[test]
    fn zero_terms_are_dropped() {
        let z = PolyZZbar::z(1, 0);
        assert!(z.sub(&z).is_zero());
        assert_eq!(z.sub(&z).degree(), None);
    }
}
