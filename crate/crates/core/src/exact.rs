//! Exact scalars for the symbol algebra.
//!
//! A [`Scalar`] is a finite sum `Σ c_s √s` where every `s` is a square-free
//! positive integer and every `c_s` is a Gaussian rational. The set is closed
//! under addition, multiplication and conjugation, which is all the symbol
//! calculus needs: the normalisations `(α!)^{±1/2}` stay exact instead of
//! being rounded.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;
pub type GaussianRational = Complex<Rational>;

/// `n!` as an exact integer. Panics past `33!`, which overflows `i128`.
pub fn factorial(n: u32) -> i128 {
    assert!(n <= 33, "factorial({n}) overflows i128");
    (1..=n as i128).product()
}

pub fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Splits `n > 0` as `square_free * root²`.
fn square_free_split(mut n: u128) -> (u128, u128) {
    let mut free = 1u128;
    let mut root = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= n;
    (free, root)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    // sorted by radicand, no zero coefficients; radicand 1 is the rational part
    terms: Vec<(u64, GaussianRational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::from_gaussian(Complex::new(Rational::zero(), Rational::one()))
    }

    pub fn from_int(v: i128) -> Self {
        Self::from_rational(Rational::from_integer(v))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_gaussian(Complex::new(q, Rational::zero()))
    }

    pub fn from_gaussian(c: GaussianRational) -> Self {
        Self::with_radical(1, c)
    }

    fn with_radical(radicand: u64, c: GaussianRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(radicand, c)],
            }
        }
    }

    /// Exact `√q` for a non-negative rational `q`.
    pub fn sqrt(q: Rational) -> Self {
        assert!(!q.is_negative(), "sqrt of negative rational {q}");
        if q.is_zero() {
            return Self::zero();
        }
        // √(p/r) = √(p r) / r
        let p = *q.numer() as u128;
        let r = *q.denom() as u128;
        let (free, root) = square_free_split(p * r);
        let coeff = Rational::new(root as i128, r as i128);
        Self::with_radical(free as u64, Complex::new(coeff, Rational::zero()))
    }

    /// `(num/den)^{1/2}` for positive integers.
    pub fn sqrt_ratio(num: i128, den: i128) -> Self {
        Self::sqrt(Rational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 1 && self.terms[0].1.is_one()
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(s, c)| (*s, c.conj())).collect(),
        }
    }

    /// The value if it is a rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, c)] if c.im.is_zero() => Some(c.re),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (*s, Complex::new(c.re * q, c.im * q)))
                .collect(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (s, c)| {
            let r = (*s as f64).sqrt();
            acc + Complex64::new(
                c.re.to_f64().unwrap_or(f64::NAN) * r,
                c.im.to_f64().unwrap_or(f64::NAN) * r,
            )
        })
    }

    fn merge(a: &[(u64, GaussianRational)], b: &[(u64, GaussianRational)], sign: bool) -> Self {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if sign { -b[j].1 } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { a[i].1 - b[j].1 } else { a[i].1 + b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self { terms: out }
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let ([(1, a)], [(1, b)]) = (self.terms.as_slice(), other.terms.as_slice()) {
            return Self::from_gaussian(a * b);
        }
        let mut acc: Vec<(u64, GaussianRational)> = Vec::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let g = s.gcd(t);
                let radicand = (s / g) * (t / g);
                let gr = Rational::from_integer(g as i128);
                let c = a * b * Complex::new(gr, Rational::zero());
                match acc.binary_search_by(|(r, _)| r.cmp(&radicand)) {
                    Ok(pos) => acc[pos].1 += c,
                    Err(pos) => acc.insert(pos, (radicand, c)),
                }
            }
        }
        acc.retain(|(_, c)| !c.is_zero());
        Self { terms: acc }
    }
}

impl From<i128> for Scalar {
    fn from(v: i128) -> Self {
        Self::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::merge(&self.terms, &rhs.terms, false)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::merge(&self.terms, &rhs.terms, true)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.product(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let coeff = if c.im.is_zero() {
                    format!("{}", c.re)
                } else if c.re.is_zero() {
                    format!("{}i", c.im)
                } else {
                    format!("({}+{}i)", c.re, c.im)
                };
                if *s == 1 {
                    coeff
                } else {
                    format!("{coeff}√{s}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        for (p, q) in [(2, 1), (3, 4), (6, 5), (40320, 2), (1, 720)] {
            let r = Scalar::sqrt_ratio(p, q);
            assert_eq!(&r * &r, Scalar::from_rational(Rational::new(p, q)));
        }
    }

    #[test]
    fn radicals_combine() {
        let s2 = Scalar::sqrt_ratio(2, 1);
        let s3 = Scalar::sqrt_ratio(3, 1);
        let s6 = Scalar::sqrt_ratio(6, 1);
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s6 * &s2, Scalar::from_int(2) * &s3);
        let sum = &s2 + &s3;
        assert_eq!(&sum - &s3, s2);
        assert!((sum.to_c64().re - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn conj_and_i() {
        let z = Scalar::i() * Scalar::sqrt_ratio(1, 2);
        assert_eq!(&z * &z.conj(), Scalar::from_rational(Rational::new(1, 2)));
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(8), 40320);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
    }
}
