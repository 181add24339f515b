//! Exact sparse operators on truncated polynomial spaces.
//!
//! Every operator carries the range of input degrees on which the truncated
//! matrix agrees with the untruncated endomorphism, together with the range of
//! degree shifts it can produce. Composition propagates both, so identities
//! are only ever compared where they are certified.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, GradedBasis};
use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar};
use crate::poly::PolyZZbar;

/// Column-major sparse matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    cols: Vec<BTreeMap<usize, Scalar>>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            cols: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.cols[col].get(&row).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, row: usize, col: usize, v: Scalar) {
        if v.is_zero() {
            self.cols[col].remove(&row);
        } else {
            self.cols[col].insert(row, v);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, v: &Scalar) {
        let cur = self.get(row, col);
        self.set(row, col, cur + v);
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, Scalar> {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// `self · rhs`
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for (c, col) in rhs.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, b) in col {
                for (r, a) in &self.cols[*k] {
                    let e = acc.entry(*r).or_default();
                    *e += &(a * b);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.cols[c] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (r, c, v) in rhs.entries() {
            out.add_at(r, c, v);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.entries() {
            out.set(r, c, v * s);
        }
        out
    }

    pub fn to_c64(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.to_c64();
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// An endomorphism of a truncated polynomial space, in the monomial basis.
///
/// `exact_upto` is the largest input degree whose column is faithful;
/// `shift` bounds `deg(output) - deg(input)` from below and above.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    basis: Arc<GradedBasis>,
    matrix: ExactMatrix,
    exact_upto: i64,
    shift: (i64, i64),
}

/// Elements of `S(ℂⁿ)` acting on the truncated antiholomorphic space.
pub type FockOperator = TruncatedOperator;
/// Elements of `S̃(ℂⁿ)` acting on the truncated full polynomial space.
pub type TildeOperator = TruncatedOperator;

impl TruncatedOperator {
    pub fn new(basis: Arc<GradedBasis>, matrix: ExactMatrix, exact_upto: i64, shift: (i64, i64)) -> Self {
        assert_eq!(basis.len(), matrix.dim());
        Self {
            basis,
            matrix,
            exact_upto,
            shift,
        }
    }

    /// Builds an operator column by column from an exact polynomial map.
    /// `shift` must bound the degree change of `map`; terms of degree above
    /// the cap are dropped and the affected columns are excluded from the
    /// faithful range.
    pub fn from_map(
        basis: &Arc<GradedBasis>,
        shift: (i64, i64),
        map: impl Fn(&PolyZZbar) -> PolyZZbar,
    ) -> Self {
        let dim = basis.len();
        let cap = basis.degree_cap() as i64;
        let mut matrix = ExactMatrix::zeros(dim);
        for (c, m) in basis.monomials().iter().enumerate() {
            let image = map(&PolyZZbar::monomial(m.clone()));
            for (mono, v) in image.terms() {
                match basis.index_of(mono) {
                    Some(r) => matrix.set(r, c, v.clone()),
                    None => debug_assert!(
                        (mono.degree() as i64) > cap,
                        "image {mono} outside the basis but below the cap"
                    ),
                }
            }
        }
        Self::new(basis.clone(), matrix, cap - shift.1.max(0), shift)
    }

    pub fn identity(basis: &Arc<GradedBasis>) -> Self {
        Self::new(
            basis.clone(),
            ExactMatrix::identity(basis.len()),
            basis.degree_cap() as i64,
            (0, 0),
        )
    }

    pub fn zero(basis: &Arc<GradedBasis>) -> Self {
        Self::new(
            basis.clone(),
            ExactMatrix::zeros(basis.len()),
            basis.degree_cap() as i64,
            (0, 0),
        )
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn exactness_degree(&self) -> i64 {
        self.exact_upto
    }

    pub fn shift(&self) -> (i64, i64) {
        self.shift
    }

    /// Narrows the degree-shift bounds when the caller knows them to be tighter.
    pub fn with_shift(mut self, shift: (i64, i64)) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_exactness(mut self, exact_upto: i64) -> Self {
        self.exact_upto = exact_upto;
        self
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.matrix.get(row, col)
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis.compatible(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `self ∘ rhs`
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_basis(rhs)?;
        let exact = rhs.exact_upto.min(self.exact_upto - rhs.shift.1);
        let shift = (self.shift.0 + rhs.shift.0, self.shift.1 + rhs.shift.1);
        Ok(Self::new(
            self.basis.clone(),
            self.matrix.matmul(&rhs.matrix),
            exact,
            shift,
        ))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_basis(rhs)?;
        Ok(Self::new(
            self.basis.clone(),
            self.matrix.add(&rhs.matrix),
            self.exact_upto.min(rhs.exact_upto),
            (self.shift.0.min(rhs.shift.0), self.shift.1.max(rhs.shift.1)),
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.basis.clone(), self.matrix.scale(s), self.exact_upto, self.shift)
    }

    /// `[self, rhs] = self∘rhs − rhs∘self`
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// Hilbert-space adjoint for the Gaussian inner product, in which the
    /// monomials `z̄^α` are orthogonal with `‖z̄^α‖² = α!`. Only defined on the
    /// antiholomorphic space, where that Gram matrix is diagonal.
    pub fn adjoint(&self) -> Result<Self> {
        if self.basis.kind() != BasisKind::Antiholomorphic {
            return Err(Error::InvalidArgument(
                "matrix adjoint is only available on the antiholomorphic space".into(),
            ));
        }
        let dim = self.basis.len();
        let fact: Vec<i128> = self
            .basis
            .monomials()
            .iter()
            .map(|m| m.anti.factorial())
            .collect();
        let mut out = ExactMatrix::zeros(dim);
        for (r, c, v) in self.matrix.entries() {
            let w = v.conj().scale(&Rational::new(fact[r], fact[c]));
            out.set(c, r, w);
        }
        Ok(Self::new(
            self.basis.clone(),
            out,
            self.exact_upto + self.shift.0,
            (-self.shift.1, -self.shift.0),
        ))
    }

    /// Splits into even and odd parts (`s = s⁺ + s⁻`), by the parity of the
    /// degree change of each entry.
    pub fn parity_split(&self) -> (Self, Self) {
        let dim = self.basis.len();
        let mut even = ExactMatrix::zeros(dim);
        let mut odd = ExactMatrix::zeros(dim);
        for (r, c, v) in self.matrix.entries() {
            if (self.basis.degree_of(r) + self.basis.degree_of(c)).is_multiple_of(2) {
                even.set(r, c, v.clone());
            } else {
                odd.set(r, c, v.clone());
            }
        }
        (
            Self::new(self.basis.clone(), even, self.exact_upto, self.shift),
            Self::new(self.basis.clone(), odd, self.exact_upto, self.shift),
        )
    }

    /// Parity on the faithful range. The zero operator counts as even.
    pub fn parity(&self) -> Parity {
        let mut has_even = false;
        let mut has_odd = false;
        for (r, c, _) in self.matrix.entries() {
            if (self.basis.degree_of(c) as i64) > self.exact_upto {
                continue;
            }
            if (self.basis.degree_of(r) + self.basis.degree_of(c)).is_multiple_of(2) {
                has_even = true;
            } else {
                has_odd = true;
            }
        }
        match (has_even, has_odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Applies the operator to a polynomial whose terms all lie in the basis.
    pub fn apply(&self, f: &PolyZZbar) -> Result<PolyZZbar> {
        let mut out = PolyZZbar::zero(self.basis.n());
        for (m, c) in f.terms() {
            let col = self.basis.index_of(m).ok_or(Error::DegreeExceedsCap {
                degree: m.degree() as usize,
                cap: self.basis.degree_cap(),
            })?;
            for (r, v) in self.matrix.column(col) {
                out.add_term(self.basis.monomial(*r).clone(), &(v * c));
            }
        }
        Ok(out)
    }

    /// Image of the `col`-th basis monomial.
    pub fn column_poly(&self, col: usize) -> PolyZZbar {
        let mut out = PolyZZbar::zero(self.basis.n());
        for (r, v) in self.matrix.column(col) {
            out.add_term(self.basis.monomial(*r).clone(), v);
        }
        out
    }

    /// Largest input degree on which both operators are faithful.
    pub fn common_range(&self, other: &Self) -> i64 {
        self.exact_upto.min(other.exact_upto)
    }

    /// Exact equality of all columns with input degree `≤ upto`.
    pub fn agrees_upto(&self, other: &Self, upto: i64) -> bool {
        (0..self.basis.len())
            .filter(|&c| self.basis.degree_of(c) as i64 <= upto)
            .all(|c| self.matrix.column(c) == other.matrix.column(c))
    }

    /// Exact equality on the common faithful range.
    pub fn faithful_eq(&self, other: &Self) -> bool {
        self.basis.compatible(&other.basis) && self.agrees_upto(other, self.common_range(other))
    }

    /// Largest entry modulus of `self − other` over columns of degree `≤ upto`.
    pub fn residual_upto(&self, other: &Self, upto: i64) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.basis.len() {
            if self.basis.degree_of(c) as i64 > upto {
                continue;
            }
            let mut rows: Vec<usize> = self.matrix.column(c).keys().copied().collect();
            rows.extend(other.matrix.column(c).keys().copied());
            for r in rows {
                let d = (self.matrix.get(r, c) - other.matrix.get(r, c)).to_c64().norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Matrix in the orthonormal basis `(α!)^{-1/2} z̄^α`, as floats.
    /// Only meaningful on the antiholomorphic space.
    pub fn to_orthonormal_c64(&self) -> DMatrix<Complex64> {
        let dim = self.basis.len();
        let norms: Vec<f64> = self
            .basis
            .monomials()
            .iter()
            .map(|m| (m.anti.factorial() as f64).sqrt())
            .collect();
        let mut out = DMatrix::zeros(dim, dim);
        for (r, c, v) in self.matrix.entries() {
            out[(r, c)] = v.to_c64() * (norms[r] / norms[c]);
        }
        out
    }

    /// Dump entries as `[row, col, re, im]` in the monomial basis.
    pub fn dump(&self) -> MatrixDump {
        MatrixDump {
            n: self.basis.n(),
            degree: self.basis.degree_cap(),
            kind: self.basis.kind(),
            entries: self
                .matrix
                .entries()
                .map(|(r, c, v)| {
                    let z = v.to_c64();
                    (r, c, z.re, z.im)
                })
                .collect(),
        }
    }
}

/// JSON matrix dump: `{n, D, kind, entries: [[row, col, re, im]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub n: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    pub kind: BasisKind,
    pub entries: Vec<(usize, usize, f64, f64)>,
}
