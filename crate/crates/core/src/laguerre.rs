//! Generalised Laguerre polynomials `Q_m^{(p)}(x) = x^{-p}/m! (d/dx − 1)^m x^{m+p}`
//! with exact rational coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{binomial, factorial, Rational, Scalar};
use crate::poly::{Monomial, MultiIndex, PolyZZbar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaguerrePoly {
    pub m: u32,
    pub p: u32,
    /// `coeffs[j]` multiplies `x^j`
    #[serde(skip)]
    pub coeffs: Vec<Rational>,
}

impl LaguerrePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn at_zero(&self) -> Rational {
        self.coeffs[0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_rational(&self, x: Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `Q(|z|²)` as a polynomial in `(z, z̄)` on `ℂ¹`.
    pub fn of_modulus_squared(&self) -> PolyZZbar {
        let mut out = PolyZZbar::zero(1);
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = MultiIndex::new(vec![j as u32]);
            out.add_term(Monomial::new(e.clone(), e), &Scalar::from_rational(*c));
        }
        out
    }
}

/// Builds `Q_m^{(p)}` by applying `(d/dx − 1)` to `x^{m+p}` `m` times.
pub fn laguerre_q(m: u32, p: u32) -> LaguerrePoly {
    let top = (m + p) as usize;
    let mut c = vec![Rational::zero(); top + 1];
    c[top] = Rational::one();
    for _ in 0..m {
        let mut next: Vec<Rational> = c.iter().map(|v| -v).collect();
        for j in 1..c.len() {
            next[j - 1] += c[j] * Rational::from_integer(j as i128);
        }
        c = next;
    }
    // every coefficient below x^p vanishes
    debug_assert!(c[..p as usize].iter().all(Zero::is_zero));
    let mf = Rational::from_integer(factorial(m));
    let coeffs = c[p as usize..].iter().map(|v| v / mf).collect();
    LaguerrePoly { m, p, coeffs }
}

/// Exact multivariate polynomial in `x₁, …, xₙ`.
type MultiPoly = BTreeMap<Vec<u32>, Rational>;

fn add_into(acc: &mut MultiPoly, e: Vec<u32>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(e.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&e);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumIdentityReport {
    pub m: u32,
    pub n: u32,
    pub terms_lhs: usize,
    pub terms_rhs: usize,
    pub equal: bool,
    /// largest coefficient discrepancy; zero whenever `equal`
    pub residual: f64,
}

/// Compares `Q_m^{(n−1)}(x₁+…+xₙ)` with `Σ_{|α|=m} Π Q_{α(i)}^{(0)}(x_i)`
/// as exact polynomials.
pub fn laguerre_sum_identity(m: u32, n: u32) -> SumIdentityReport {
    assert!(n >= 1);
    let nn = n as usize;
    let q = laguerre_q(m, n - 1);
    let mut lhs = MultiPoly::new();
    for (j, c) in q.coeffs.iter().enumerate() {
        // (x₁+…+xₙ)^j via the multinomial theorem
        for e in MultiIndex::of_weight(nn, j as u32) {
            let mut coef = Rational::from_integer(factorial(j as u32));
            for &ei in e.entries() {
                coef /= Rational::from_integer(factorial(ei));
            }
            add_into(&mut lhs, e.entries().to_vec(), coef * c);
        }
    }
    let mut rhs = MultiPoly::new();
    for alpha in MultiIndex::of_weight(nn, m) {
        let mut prod: MultiPoly = [(vec![0; nn], Rational::one())].into_iter().collect();
        for (i, &ai) in alpha.entries().iter().enumerate() {
            let qi = laguerre_q(ai, 0);
            let mut next = MultiPoly::new();
            for (e, c) in &prod {
                for (j, d) in qi.coeffs.iter().enumerate() {
                    let mut e2 = e.clone();
                    e2[i] += j as u32;
                    add_into(&mut next, e2, c * d);
                }
            }
            prod = next;
        }
        for (e, c) in prod {
            add_into(&mut rhs, e, c);
        }
    }
    let mut diff = lhs.clone();
    for (e, c) in &rhs {
        add_into(&mut diff, e.clone(), -c);
    }
    use num_traits::ToPrimitive;
    let residual = diff
        .values()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs())
        .fold(0.0, f64::max);
    SumIdentityReport {
        m,
        n,
        terms_lhs: lhs.len(),
        terms_rhs: rhs.len(),
        equal: diff.is_empty(),
        residual,
    }
}

/// `binomial(m+p, m)`, the value of `Q_m^{(p)}` at zero.
pub fn value_at_zero(m: u32, p: u32) -> i128 {
    binomial((m + p) as u64, m as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn low_orders() {
        assert_eq!(laguerre_q(0, 3).coeffs, vec![r(1, 1)]);
        assert_eq!(laguerre_q(1, 0).coeffs, vec![r(1, 1), r(-1, 1)]);
        assert_eq!(laguerre_q(2, 0).coeffs, vec![r(1, 1), r(-2, 1), r(1, 2)]);
        // Q₁⁽¹⁾ = 2 − x
        assert_eq!(laguerre_q(1, 1).coeffs, vec![r(2, 1), r(-1, 1)]);
    }

    #[test]
    fn value_at_origin_and_leading_coefficient() {
        for m in 0..8 {
            for p in 0..4 {
                let q = laguerre_q(m, p);
                assert_eq!(q.degree(), m as usize);
                assert_eq!(q.at_zero(), Rational::from_integer(value_at_zero(m, p)));
                let sign = if m % 2 == 0 { 1 } else { -1 };
                assert_eq!(q.coeffs[m as usize], r(sign, factorial(m)));
            }
        }
    }

    #[test]
    fn three_term_recurrence() {
        // (m+1) L_{m+1} = (2m+1+p−x) L_m − (m+p) L_{m−1}
        let x = r(3, 7);
        for p in 0..3 {
            for m in 1..7u32 {
                let lhs = Rational::from_integer(m as i128 + 1) * laguerre_q(m + 1, p).eval_rational(x);
                let a = Rational::from_integer((2 * m + 1 + p) as i128) - x;
                let rhs = a * laguerre_q(m, p).eval_rational(x)
                    - Rational::from_integer((m + p) as i128) * laguerre_q(m - 1, p).eval_rational(x);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sum_identity_small_cases() {
        for (m, n) in [(0, 1), (0, 4), (1, 2), (3, 3), (4, 2), (2, 5)] {
            let rep = laguerre_sum_identity(m, n);
            assert!(rep.equal, "m={m} n={n}");
            assert_eq!(rep.residual, 0.0);
        }
    }
}
