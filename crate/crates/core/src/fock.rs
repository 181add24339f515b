//! The symbol algebra `S(ℂⁿ)` on truncated antiholomorphic polynomials.
//!
//! `D(ℂⁿ) = ℂ[z̄₁, …, z̄ₙ]` carries the Gaussian inner product in which
//! `(α!)^{-1/2} z̄^α` is orthonormal. Operators are stored in the monomial
//! basis `z̄^α`; the `(α!)^{±1/2}` normalisations of `ρ_αβ` are exact surds.

use std::sync::Arc;

use crate::basis::{enumerate_basis, BasisKind, GradedBasis};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::operator::{ExactMatrix, FockOperator};
use crate::poly::{MultiIndex, PolyZZbar};

/// Truncated antiholomorphic basis `{z̄^α : |α| ≤ D}` shared between operators.
pub fn fock_basis(n: usize, degree_cap: i64) -> Result<Arc<GradedBasis>> {
    enumerate_basis(n, degree_cap, BasisKind::Antiholomorphic).map(Arc::new)
}

fn check_index(basis: &GradedBasis, i: usize) -> Result<()> {
    if i == 0 || i > basis.n() {
        Err(Error::IndexOutOfRange { index: i, n: basis.n() })
    } else {
        Ok(())
    }
}

/// Annihilation and creation operators `(a_i, a_i*)` with a 1-based index.
///
/// On the antiholomorphic space `a_i = ∂/∂z̄_i` and `a_i*` is multiplication
/// by `z̄_i`; on the full space `a_i* = z̄_i − ∂/∂z_i`.
pub fn ladder_matrices(basis: &Arc<GradedBasis>, i: usize) -> Result<(FockOperator, FockOperator)> {
    check_index(basis, i)?;
    let k = i - 1;
    let a = FockOperator::from_map(basis, (-1, -1), |p| p.d_zbar(k));
    let a_star = match basis.kind() {
        BasisKind::Antiholomorphic => FockOperator::from_map(basis, (1, 1), |p| p.mul_zbar(k)),
        BasisKind::Full => FockOperator::from_map(basis, (-1, 1), |p| p.mul_zbar(k).sub(&p.d_z(k))),
    };
    Ok((a, a_star))
}

/// `ρ(Y)` for `Y = Σ u_i U_i + Σ v_i Ū_i`: multiplication by `−z̄_i` for
/// `U_i` and `∂/∂z̄_i` for `Ū_i`.
pub fn rho_tangent(basis: &Arc<GradedBasis>, u: &[Scalar], v: &[Scalar]) -> Result<FockOperator> {
    let n = basis.n();
    if basis.kind() != BasisKind::Antiholomorphic {
        return Err(Error::InvalidArgument("ρ acts on the antiholomorphic space".into()));
    }
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, got: len });
        }
    }
    let op = FockOperator::from_map(basis, (-1, 1), |p| {
        let mut out = PolyZZbar::zero(n);
        for k in 0..n {
            out = out.sub(&p.mul_zbar(k).scale(&u[k]));
            out = out.add(&p.d_zbar(k).scale(&v[k]));
        }
        out
    });
    Ok(op)
}

/// Coordinates of a complex tangent vector with respect to `(U_i, Ū_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
}

impl TangentVector {
    /// Real vector `∂/∂x_i` for the complex coordinate `z_i = (x_i + i y_i)/√2`:
    /// `∂_x = (U + Ū)/√2`.
    pub fn d_x(n: usize, i: usize) -> Self {
        let h = Scalar::sqrt_ratio(1, 2);
        let mut t = Self::zero(n);
        t.u[i] = h.clone();
        t.v[i] = h;
        t
    }

    /// `∂_y = i(U − Ū)/√2`.
    pub fn d_y(n: usize, i: usize) -> Self {
        let h = Scalar::i() * Scalar::sqrt_ratio(1, 2);
        let mut t = Self::zero(n);
        t.u[i] = h.clone();
        t.v[i] = -h;
        t
    }

    pub fn zero(n: usize) -> Self {
        Self {
            u: vec![Scalar::zero(); n],
            v: vec![Scalar::zero(); n],
        }
    }

    pub fn rho(&self, basis: &Arc<GradedBasis>) -> Result<FockOperator> {
        rho_tangent(basis, &self.u, &self.v)
    }
}

/// `ρ_αβ`: sends `(β!)^{-1/2} z̄^β` to `(α!)^{-1/2} z̄^α` and kills every other
/// monomial.
pub fn rho_ab(basis: &Arc<GradedBasis>, alpha: &MultiIndex, beta: &MultiIndex) -> Result<FockOperator> {
    let cap = basis.degree_cap();
    for m in [alpha, beta] {
        if m.dim() != basis.n() {
            return Err(Error::DimensionMismatch { expected: basis.n(), got: m.dim() });
        }
        if m.degree() as usize > cap {
            return Err(Error::DegreeExceedsCap { degree: m.degree() as usize, cap });
        }
    }
    let row = basis.index_of_anti(alpha).expect("degree checked");
    let col = basis.index_of_anti(beta).expect("degree checked");
    let mut matrix = ExactMatrix::zeros(basis.len());
    // z̄^β ↦ (β!/α!)^{1/2} z̄^α
    matrix.set(row, col, Scalar::sqrt_ratio(beta.factorial(), alpha.factorial()));
    let s = alpha.degree() as i64 - beta.degree() as i64;
    Ok(FockOperator::new(basis.clone(), matrix, cap as i64, (s, s)))
}

/// `π_m = Σ_{|α|=m} ρ_αα`, the projector onto homogeneous degree `m`.
pub fn pi_m(basis: &Arc<GradedBasis>, m: usize) -> Result<FockOperator> {
    let cap = basis.degree_cap();
    if m > cap {
        return Err(Error::DegreeExceedsCap { degree: m, cap });
    }
    let mut matrix = ExactMatrix::zeros(basis.len());
    for i in 0..basis.len() {
        if basis.degree_of(i) == m {
            matrix.set(i, i, Scalar::one());
        }
    }
    Ok(FockOperator::new(basis.clone(), matrix, cap as i64, (0, 0)))
}

/// All multi-indices `α` with `|α| ≤ D`, in basis order.
pub fn multi_indices(basis: &GradedBasis) -> Vec<MultiIndex> {
    basis.monomials().iter().map(|m| m.anti.clone()).collect()
}

/// `π_m ρ(X₁) ⋯ ρ(X_{2p}) π_m`, the symbol of a derivative Toeplitz operator.
pub fn derivative_symbol(basis: &Arc<GradedBasis>, m: usize, fields: &[TangentVector]) -> Result<FockOperator> {
    let pi = pi_m(basis, m)?;
    let mut acc = pi.clone();
    for x in fields.iter().rev() {
        acc = x.rho(basis)?.compose(&acc)?;
    }
    pi.compose(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Parity;
    use crate::poly::Monomial;

    fn zb(n: usize, a: &[u32]) -> PolyZZbar {
        let _ = n;
        PolyZZbar::monomial(Monomial::antiholomorphic(MultiIndex::new(a.to_vec())))
    }

    #[test]
    fn annihilation_differentiates() {
        let b = fock_basis(1, 4).unwrap();
        let (a, a_star) = ladder_matrices(&b, 1).unwrap();
        let img = a.apply(&zb(1, &[2])).unwrap();
        assert_eq!(img, zb(1, &[1]).scale(&Scalar::from_int(2)));
        assert_eq!(a_star.apply(&zb(1, &[1])).unwrap(), zb(1, &[2]));
        assert_eq!(a_star.exactness_degree(), 3);
    }

    #[test]
    fn ladder_index_out_of_range() {
        let b = fock_basis(2, 3).unwrap();
        assert!(matches!(
            ladder_matrices(&b, 3),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(ladder_matrices(&b, 0).is_err());
    }

    #[test]
    fn full_space_creation_operator() {
        let b = Arc::new(enumerate_basis(1, 3, BasisKind::Full).unwrap());
        let (_, a_star) = ladder_matrices(&b, 1).unwrap();
        // a*(z) = z̄ z − 1
        let z = PolyZZbar::z(1, 0);
        let expected = z.mul(&PolyZZbar::zbar(1, 0)).sub(&PolyZZbar::one(1));
        assert_eq!(a_star.apply(&z).unwrap(), expected);
    }

    #[test]
    fn rho_of_basis_vectors() {
        let b = fock_basis(1, 3).unwrap();
        let one = PolyZZbar::one(1);
        let u = rho_tangent(&b, &[Scalar::one()], &[Scalar::zero()]).unwrap();
        let ubar = rho_tangent(&b, &[Scalar::zero()], &[Scalar::one()]).unwrap();
        assert_eq!(u.apply(&one).unwrap(), zb(1, &[1]).scale(&Scalar::from_int(-1)));
        assert_eq!(ubar.apply(&zb(1, &[1])).unwrap(), one);
        assert!(ubar.apply(&one).unwrap().is_zero());
        assert_eq!(u.parity(), Parity::Odd);
    }

    #[test]
    fn rho_tangent_dimension_mismatch() {
        let b = fock_basis(2, 2).unwrap();
        let err = rho_tangent(&b, &[Scalar::one()], &[Scalar::one(), Scalar::one()]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn rho00_evaluates_at_origin() {
        let b = fock_basis(2, 3).unwrap();
        let r = rho_ab(&b, &MultiIndex::zeros(2), &MultiIndex::zeros(2)).unwrap();
        let f = zb(2, &[1, 0]).add(&PolyZZbar::constant(2, Scalar::from_int(5)));
        assert_eq!(r.apply(&f).unwrap(), PolyZZbar::constant(2, Scalar::from_int(5)));
    }

    #[test]
    fn rho_ab_rejects_large_degree() {
        let b = fock_basis(1, 2).unwrap();
        assert!(rho_ab(&b, &MultiIndex::new(vec![3]), &MultiIndex::new(vec![0])).is_err());
        assert!(pi_m(&b, 3).is_err());
    }

    #[test]
    fn pi_rank_counts_weight() {
        let b = fock_basis(2, 4).unwrap();
        let p = pi_m(&b, 1).unwrap();
        assert_eq!(p.matrix().nnz(), 2);
        assert_eq!(p.matrix().nnz(), MultiIndex::of_weight(2, 1).len());
    }

    #[test]
    fn parity_split_of_sum() {
        let b = fock_basis(1, 3).unwrap();
        let r10 = rho_ab(&b, &MultiIndex::new(vec![1]), &MultiIndex::new(vec![0])).unwrap();
        let r00 = rho_ab(&b, &MultiIndex::new(vec![0]), &MultiIndex::new(vec![0])).unwrap();
        let (even, odd) = r10.add(&r00).unwrap().parity_split();
        assert!(even.faithful_eq(&r00));
        assert!(odd.faithful_eq(&r10));
        assert_eq!(r10.add(&r00).unwrap().parity(), Parity::Mixed);
    }

    #[test]
    fn derivative_symbol_level_zero() {
        // π₀ρ(∂x)ρ(∂x)π₀ = −1/2 on constants
        let b = fock_basis(1, 4).unwrap();
        let dx = TangentVector::d_x(1, 0);
        let s = derivative_symbol(&b, 0, &[dx.clone(), dx]).unwrap();
        assert_eq!(s.entry(0, 0), Scalar::from_rational(crate::exact::Rational::new(-1, 2)));
    }
}
