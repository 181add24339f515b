//! The calculus on the full polynomial space `P(ℂⁿ)`.
//!
//! Polynomials in `(z, z̄)` carry the Gaussian inner product
//! `⟨f, g⟩ = π^{-n} ∫ f ḡ e^{-|z|²} dx dy`, so that
//! `⟨z^a z̄^b, z^c z̄^d⟩ = Π_i δ(a_i+d_i, b_i+c_i) (a_i+d_i)!`.
//! The Landau levels `L_α` are the joint eigenspaces of the `a_i* a_i`;
//! `ρ̃_αβ` moves `L_β` onto `L_α` and `Op(q)` is the integral operator with
//! kernel `π^{-n} e^{u·v̄ − |v|²} q(u − v)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{enumerate_basis, BasisKind, GradedBasis};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, Rational, Scalar};
use crate::fock::{fock_basis, ladder_matrices};
use crate::operator::{ExactMatrix, FockOperator, TildeOperator};
use crate::poly::{Monomial, MultiIndex, PolyZZbar};
use crate::quadrature::GaussHermite;

/// Truncated full basis `{z^a z̄^b : |a|+|b| ≤ D}`.
pub fn full_basis(n: usize, degree_cap: i64) -> Result<Arc<GradedBasis>> {
    enumerate_basis(n, degree_cap, BasisKind::Full).map(Arc::new)
}

/// Gaussian inner product, conjugate-linear in the second slot.
pub fn inner_product(f: &PolyZZbar, g: &PolyZZbar) -> Scalar {
    let mut acc = Scalar::zero();
    for (m1, c1) in f.terms() {
        for (m2, c2) in g.terms() {
            let mut w: i128 = 1;
            for i in 0..f.dim() {
                let p = m1.hol.get(i) + m2.anti.get(i);
                let q = m1.anti.get(i) + m2.hol.get(i);
                if p != q {
                    w = 0;
                    break;
                }
                w *= factorial(p);
            }
            if w != 0 {
                acc += &(c1 * &c2.conj()).scale(&Rational::from_integer(w));
            }
        }
    }
    acc
}

/// Image of `z^a z̄^b` under the Bargmann projector `ρ̃₀₀`:
/// `Π_i a_i!/(a_i − b_i)! z^{a−b}` when `a ≥ b`, zero otherwise.
pub fn bargmann_project(a: &MultiIndex, b: &MultiIndex) -> PolyZZbar {
    let n = a.dim();
    match a.checked_sub(b) {
        Some(d) => {
            let mut c: i128 = 1;
            for i in 0..n {
                c *= factorial(a.get(i)) / factorial(d.get(i));
            }
            PolyZZbar::term(Monomial::holomorphic(d), Scalar::from_int(c))
        }
        None => PolyZZbar::zero(n),
    }
}

/// `ρ̃₀₀ f` for an arbitrary polynomial.
pub fn project(f: &PolyZZbar) -> PolyZZbar {
    let mut out = PolyZZbar::zero(f.dim());
    for (m, c) in f.terms() {
        out = out.add(&bargmann_project(&m.hol, &m.anti).scale(c));
    }
    out
}

/// Quadrature oracle for `ρ̃₀₀(z^a z̄^b)` evaluated at `u`:
/// `π^{-n} ∫ e^{u·v̄} v^a v̄^b e^{-|v|²} dx dy` by tensor Gauss-Hermite, `n ≤ 2`.
pub fn bargmann_project_quadrature(
    a: &MultiIndex,
    b: &MultiIndex,
    u: &[Complex64],
    rule: &GaussHermite,
) -> Result<Complex64> {
    let n = a.dim();
    if n > 2 || u.len() != n {
        return Err(Error::InvalidArgument(
            "quadrature oracle supports n <= 2 with a matching point".into(),
        ));
    }
    // the integrand factorizes over coordinates
    let mut total = Complex64::new(1.0, 0.0);
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
            for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
                let v = Complex64::new(*x, *y);
                let f = (u[i] * v.conj()).exp() * v.powu(a.get(i)) * v.conj().powu(b.get(i));
                s += f * (wx * wy);
            }
        }
        total *= s / std::f64::consts::PI;
    }
    Ok(total)
}

/// Kernel polynomial of `ρ̃_αβ`: `p_αβ = (−1)^{|β|} (α!β!)^{-1/2} (z̄ − ∂_z)^α z^β`.
///
/// This is `(−1)^{|α|+|β|}` times `(α!β!)^{-1/2} (∂_z − z̄)^α z^β`; the two
/// agree whenever `|α| + |β|` is even. Differentiating the kernel
/// `e^{u·v̄−|v|²} q(u−v)` gives `a*` in `u` and `−(z − ∂_z̄)` for each `a`
/// moved across, which fixes the sign used here.
pub fn p_ab(alpha: &MultiIndex, beta: &MultiIndex) -> PolyZZbar {
    let sign = if beta.degree().is_multiple_of(2) { 1 } else { -1 };
    landau_vector(alpha, beta).scale(&Scalar::from_int(sign))
}

/// `(α!β!)^{-1/2} (∂_z − z̄)^α z^β`, the other sign convention.
pub fn p_ab_reflected(alpha: &MultiIndex, beta: &MultiIndex) -> PolyZZbar {
    let n = alpha.dim();
    let mut p = PolyZZbar::monomial(Monomial::holomorphic(beta.clone()));
    for i in 0..n {
        for _ in 0..alpha.get(i) {
            p = p.d_z(i).sub(&p.mul_zbar(i));
        }
    }
    p.scale(&Scalar::sqrt_ratio(1, alpha.factorial() * beta.factorial()))
}

/// Kernel integral in one complex variable: the image of
/// `(u−v)^a (ū−v̄)^b v^c v̄^d` as a polynomial `Σ coeff u^s ū^t`.
fn kernel_1d(a: u32, b: u32, c: u32, d: u32) -> Vec<((u32, u32), i128)> {
    let mut out: BTreeMap<(u32, u32), i128> = BTreeMap::new();
    for i in 0..=a {
        for j in 0..=b {
            let p = i + c;
            let q = j + d;
            if p < q {
                continue;
            }
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let coef = sign
                * binomial(a as u64, i as u64)
                * binomial(b as u64, j as u64)
                * (factorial(p) / factorial(p - q));
            *out.entry((a - i + p - q, b - j)).or_insert(0) += coef;
        }
    }
    out.into_iter().filter(|(_, v)| *v != 0).collect()
}

/// `(Op(q) f)(u) = π^{-n} ∫ e^{u·v̄ − |v|²} q(u − v) f(v) dx dy`, exactly.
pub fn kernel_apply(q: &PolyZZbar, f: &PolyZZbar) -> PolyZZbar {
    let n = q.dim();
    let mut out = PolyZZbar::zero(n);
    let mut cache: HashMap<(u32, u32, u32, u32), Vec<((u32, u32), i128)>> = HashMap::new();
    for (mq, cq) in q.terms() {
        for (mf, cf) in f.terms() {
            let coeff = cq * cf;
            let mut acc: Vec<(Vec<u32>, Vec<u32>, i128)> = vec![(Vec::new(), Vec::new(), 1)];
            for i in 0..n {
                let key = (mq.hol.get(i), mq.anti.get(i), mf.hol.get(i), mf.anti.get(i));
                let k = cache
                    .entry(key)
                    .or_insert_with(|| kernel_1d(key.0, key.1, key.2, key.3));
                let mut next = Vec::with_capacity(acc.len() * k.len());
                for (h, a, c) in &acc {
                    for ((s, t), w) in k.iter() {
                        let mut h2 = h.clone();
                        h2.push(*s);
                        let mut a2 = a.clone();
                        a2.push(*t);
                        next.push((h2, a2, c * w));
                    }
                }
                acc = next;
            }
            for (h, a, c) in acc {
                let m = Monomial::new(MultiIndex::new(h), MultiIndex::new(a));
                out.add_term(m, &coeff.scale(&Rational::from_integer(c)));
            }
        }
    }
    out
}

/// Quadrature oracle for `(Op(q) f)(u)` in one complex dimension.
pub fn kernel_apply_quadrature(q: &PolyZZbar, f: &PolyZZbar, u: Complex64, rule: &GaussHermite) -> Result<Complex64> {
    if q.dim() != 1 || f.dim() != 1 {
        return Err(Error::InvalidArgument("kernel quadrature is one-dimensional".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
        for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
            let v = Complex64::new(*x, *y);
            let g = (u * v.conj()).exp() * q.eval(&[u - v]) * f.eval(&[v]);
            s += g * (wx * wy);
        }
    }
    Ok(s / std::f64::consts::PI)
}

/// `ρ̃₀₀` as a matrix on the full truncated space.
pub fn tilde_rho00(basis: &Arc<GradedBasis>) -> TildeOperator {
    let cap = basis.degree_cap() as i64;
    TildeOperator::from_map(basis, (-cap, 0), project)
}

fn require_full(basis: &GradedBasis) -> Result<()> {
    if basis.kind() == BasisKind::Full {
        Ok(())
    } else {
        Err(Error::InvalidArgument("operation needs the full polynomial basis".into()))
    }
}

fn check_index(basis: &GradedBasis, m: &MultiIndex) -> Result<()> {
    if m.dim() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), got: m.dim() });
    }
    if m.degree() as usize > basis.degree_cap() {
        return Err(Error::DegreeExceedsCap {
            degree: m.degree() as usize,
            cap: basis.degree_cap(),
        });
    }
    Ok(())
}

/// Builds the operators `ρ̃_αβ` on one full basis, caching the ladder powers.
pub struct TildeFactory {
    basis: Arc<GradedBasis>,
    lowering: Vec<TildeOperator>,
    raising: Vec<TildeOperator>,
    rho00: TildeOperator,
    raise_pow: HashMap<MultiIndex, TildeOperator>,
    // ρ̃₀₀ a^β
    proj_lower: HashMap<MultiIndex, TildeOperator>,
}

impl TildeFactory {
    pub fn new(basis: &Arc<GradedBasis>) -> Result<Self> {
        require_full(basis)?;
        let mut lowering = Vec::new();
        let mut raising = Vec::new();
        for i in 1..=basis.n() {
            let (a, a_star) = ladder_matrices(basis, i)?;
            lowering.push(a);
            raising.push(a_star);
        }
        Ok(Self {
            basis: basis.clone(),
            lowering,
            raising,
            rho00: tilde_rho00(basis),
            raise_pow: HashMap::new(),
            proj_lower: HashMap::new(),
        })
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    /// `(a*)^α`
    pub fn raise(&mut self, alpha: &MultiIndex) -> Result<TildeOperator> {
        if let Some(op) = self.raise_pow.get(alpha) {
            return Ok(op.clone());
        }
        let op = match (0..alpha.dim()).find(|&i| alpha.get(i) > 0) {
            None => TildeOperator::identity(&self.basis),
            Some(i) => {
                let prev = self.raise(&alpha.dec(i).expect("positive entry"))?;
                self.raising[i].compose(&prev)?
            }
        };
        self.raise_pow.insert(alpha.clone(), op.clone());
        Ok(op)
    }

    fn project_lower(&mut self, beta: &MultiIndex) -> Result<TildeOperator> {
        if let Some(op) = self.proj_lower.get(beta) {
            return Ok(op.clone());
        }
        let mut op = TildeOperator::identity(&self.basis);
        for i in 0..beta.dim() {
            for _ in 0..beta.get(i) {
                op = self.lowering[i].compose(&op)?;
            }
        }
        let op = self.rho00.compose(&op)?;
        self.proj_lower.insert(beta.clone(), op.clone());
        Ok(op)
    }

    /// `ρ̃_αβ = (α!β!)^{-1/2} (a*)^α ρ̃₀₀ a^β`
    pub fn tilde_rho(&mut self, alpha: &MultiIndex, beta: &MultiIndex) -> Result<TildeOperator> {
        check_index(&self.basis, alpha)?;
        check_index(&self.basis, beta)?;
        let left = self.raise(alpha)?;
        let right = self.project_lower(beta)?;
        let s = Scalar::sqrt_ratio(1, alpha.factorial() * beta.factorial());
        Ok(left.compose(&right)?.scale(&s))
    }
}

/// `ρ̃_αβ` on its own; prefer [`TildeFactory`] when building many.
pub fn tilde_rho(basis: &Arc<GradedBasis>, alpha: &MultiIndex, beta: &MultiIndex) -> Result<TildeOperator> {
    TildeFactory::new(basis)?.tilde_rho(alpha, beta)
}

/// Coefficients of `q` in the basis `p_αβ`. The leading monomial of `p_αβ`
/// is `(−1)^{|β|} (α!β!)^{-1/2} z^β z̄^α`, so the expansion is triangular.
pub fn expand_in_p(q: &PolyZZbar) -> Vec<(MultiIndex, MultiIndex, Scalar)> {
    let mut rest = q.clone();
    let mut out = Vec::new();
    while let Some((m, c)) = rest
        .terms()
        .max_by_key(|(m, _)| (m.degree(), (*m).clone()))
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        let alpha = m.anti.clone();
        let beta = m.hol.clone();
        let sign = if beta.degree() % 2 == 0 { 1 } else { -1 };
        let inv_lead = Scalar::sqrt_ratio(alpha.factorial() * beta.factorial(), 1).scale(&Rational::from_integer(sign));
        let coeff = &c * &inv_lead;
        rest = rest.sub(&p_ab(&alpha, &beta).scale(&coeff));
        out.push((alpha, beta, coeff));
    }
    out
}

/// `Op(q) = Σ c_αβ ρ̃_αβ` through the triangular expansion.
pub fn op_of(factory: &mut TildeFactory, q: &PolyZZbar) -> Result<TildeOperator> {
    let basis = factory.basis().clone();
    if q.dim() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), got: q.dim() });
    }
    if let Some(d) = q.degree() {
        if d as usize > basis.degree_cap() {
            return Err(Error::DegreeExceedsCap { degree: d as usize, cap: basis.degree_cap() });
        }
    }
    let mut acc: Option<TildeOperator> = None;
    for (alpha, beta, c) in expand_in_p(q) {
        let term = factory.tilde_rho(&alpha, &beta)?.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.unwrap_or_else(|| TildeOperator::zero(&basis)))
}

/// `Op(q)` column by column from the integral kernel.
pub fn op_kernel(basis: &Arc<GradedBasis>, q: &PolyZZbar) -> Result<TildeOperator> {
    require_full(basis)?;
    let cap = basis.degree_cap() as i64;
    let d = q.degree().unwrap_or(0) as i64;
    Ok(TildeOperator::from_map(basis, (-cap, d), |f| kernel_apply(q, f)))
}

/// Restriction of an operator on `P(ℂⁿ)` to the antiholomorphic subspace.
/// Fails if some antiholomorphic column leaves the subspace.
pub fn restrict_to_antiholomorphic(op: &TildeOperator) -> Result<FockOperator> {
    let full = op.basis();
    let anti = fock_basis(full.n(), full.degree_cap() as i64)?;
    let mut m = ExactMatrix::zeros(anti.len());
    for (c, mono) in anti.monomials().iter().enumerate() {
        let col = full.index_of(mono).expect("antiholomorphic monomial in full basis");
        for (r, v) in op.matrix().column(col) {
            let target = full.monomial(*r);
            let row = anti.index_of(target).ok_or_else(|| {
                Error::InvalidArgument(format!("column {mono} leaves the antiholomorphic subspace"))
            })?;
            m.set(row, c, v.clone());
        }
    }
    Ok(FockOperator::new(anti, m, op.exactness_degree(), op.shift()))
}

/// `tr(Op(q)|_D)` on the truncation.
pub fn antiholomorphic_trace(op: &TildeOperator) -> Result<Scalar> {
    let r = restrict_to_antiholomorphic(op)?;
    let mut t = Scalar::zero();
    for i in 0..r.basis().len() {
        t += &r.entry(i, i);
    }
    Ok(t)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeLawReport {
    pub compared_upto: i64,
    pub exact: bool,
    pub residual: f64,
}

/// Compares `Op(f) ∘ Op(g)` with `Op(Op(f) g)` on the common faithful range.
pub fn op_compose_law(factory: &mut TildeFactory, f: &PolyZZbar, g: &PolyZZbar) -> Result<ComposeLawReport> {
    let lhs = op_of(factory, f)?.compose(&op_of(factory, g)?)?;
    let fg = kernel_apply(f, g);
    let rhs = op_of(factory, &fg)?;
    let upto = lhs.common_range(&rhs);
    Ok(ComposeLawReport {
        compared_upto: upto,
        exact: lhs.agrees_upto(&rhs, upto),
        residual: lhs.residual_upto(&rhs, upto),
    })
}

/// `[exp(□)(u(−ζ, z̄−ζ̄) v(z+ζ, ζ̄))]_{ζ=ζ̄=0}` with `□ = Σ ∂²/∂ζ_i∂ζ̄_i`.
pub fn star_product(u: &PolyZZbar, v: &PolyZZbar) -> PolyZZbar {
    let n = u.dim();
    let nn = 2 * n;
    // variables 0..n are z, n..2n are ζ
    let var = |i: usize| PolyZZbar::z(nn, i);
    let bar = |i: usize| PolyZZbar::zbar(nn, i);
    let minus = Scalar::from_int(-1);
    let u_hol: Vec<PolyZZbar> = (0..n).map(|i| var(n + i).scale(&minus)).collect();
    let u_anti: Vec<PolyZZbar> = (0..n).map(|i| bar(i).sub(&bar(n + i))).collect();
    let v_hol: Vec<PolyZZbar> = (0..n).map(|i| var(i).add(&var(n + i))).collect();
    let v_anti: Vec<PolyZZbar> = (0..n).map(|i| bar(n + i)).collect();
    let prod = u
        .substitute(&u_hol, &u_anti, nn)
        .mul(&v.substitute(&v_hol, &v_anti, nn));
    let mut out = PolyZZbar::zero(n);
    for (m, c) in prod.terms() {
        let h = m.hol.entries();
        let a = m.anti.entries();
        // exp(□) pairs ζ^γ ζ̄^γ to γ!
        if h[n..] != a[n..] {
            continue;
        }
        let w: i128 = h[n..].iter().map(|&g| factorial(g)).product();
        let mono = Monomial::new(MultiIndex::new(h[..n].to_vec()), MultiIndex::new(a[..n].to_vec()));
        out.add_term(mono, &c.scale(&Rational::from_integer(w)));
    }
    out
}

/// Reflection `q(z) ↦ q(−z)`.
pub fn reflect(q: &PolyZZbar) -> PolyZZbar {
    let mut out = PolyZZbar::zero(q.dim());
    for (m, c) in q.terms() {
        let s = if m.degree() % 2 == 0 { 1 } else { -1 };
        out.add_term(m.clone(), &c.scale(&Rational::from_integer(s)));
    }
    out
}

/// Which candidate orderings agree with the star product on every pair tested.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StarOrderReport {
    pub pairs: usize,
    /// `u ⋆ v = Op(u) v`
    pub op_u_v: bool,
    /// `u ⋆ v = Op(v) u`
    pub op_v_u: bool,
    /// `u ⋆ v = R(Op(Ru) Rv)` with `R q(z) = q(−z)`
    pub reflected_op_u_v: bool,
    /// `u ⋆ v = R(Op(Rv) Ru)`
    pub reflected_op_v_u: bool,
}

impl StarOrderReport {
    pub fn matching(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.op_u_v {
            v.push("Op(u)v");
        }
        if self.op_v_u {
            v.push("Op(v)u");
        }
        if self.reflected_op_u_v {
            v.push("R(Op(Ru)Rv)");
        }
        if self.reflected_op_v_u {
            v.push("R(Op(Rv)Ru)");
        }
        v
    }
}

/// Tests the candidate orderings on all monomial pairs of degree `≤ max_degree`.
pub fn star_order_report(n: usize, max_degree: u32) -> StarOrderReport {
    let mut monos = Vec::new();
    for d in 0..=max_degree {
        for e in MultiIndex::of_weight(2 * n, d) {
            let (h, a) = e.entries().split_at(n);
            monos.push(PolyZZbar::monomial(Monomial::new(
                MultiIndex::new(h.to_vec()),
                MultiIndex::new(a.to_vec()),
            )));
        }
    }
    let mut rep = StarOrderReport {
        pairs: 0,
        op_u_v: true,
        op_v_u: true,
        reflected_op_u_v: true,
        reflected_op_v_u: true,
    };
    for u in &monos {
        for v in &monos {
            let s = star_product(u, v);
            rep.pairs += 1;
            rep.op_u_v &= s == kernel_apply(u, v);
            rep.op_v_u &= s == kernel_apply(v, u);
            rep.reflected_op_u_v &= s == reflect(&kernel_apply(&reflect(u), &reflect(v)));
            rep.reflected_op_v_u &= s == reflect(&kernel_apply(&reflect(v), &reflect(u)));
        }
    }
    rep
}

/// `e_αβ = (α!β!)^{-1/2} (a*)^α z^β`, computed without truncation.
pub fn landau_vector(alpha: &MultiIndex, beta: &MultiIndex) -> PolyZZbar {
    let n = alpha.dim();
    let mut p = PolyZZbar::monomial(Monomial::holomorphic(beta.clone()));
    for i in 0..n {
        for _ in 0..alpha.get(i) {
            p = p.mul_zbar(i).sub(&p.d_z(i));
        }
    }
    p.scale(&Scalar::sqrt_ratio(1, alpha.factorial() * beta.factorial()))
}

#[derive(Clone, Debug)]
pub struct LandauDecomposition {
    pub n: usize,
    pub degree_cap: usize,
    /// `(α, spanning vectors e_αβ of L_α ∩ truncation)`
    pub levels: Vec<(MultiIndex, Vec<(MultiIndex, PolyZZbar)>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LandauReport {
    pub levels: usize,
    pub total_dim: usize,
    pub basis_dim: usize,
    /// every `e_αβ` satisfies `a_i* a_i e = α(i) e` on the truncation
    pub eigen_ok: bool,
    /// Gram matrix of all `e_αβ` is the identity
    pub orthonormal: bool,
    /// `L₀` is spanned by holomorphic monomials
    pub l0_holomorphic: bool,
}

/// Joint eigenspaces of the `a_i* a_i`, built as `L_α = (a*)^α L₀`.
pub fn landau_decompose(basis: &Arc<GradedBasis>) -> Result<LandauDecomposition> {
    require_full(basis)?;
    let n = basis.n();
    let cap = basis.degree_cap() as u32;
    let mut levels = Vec::new();
    for da in 0..=cap {
        for alpha in MultiIndex::of_weight(n, da) {
            let mut vecs = Vec::new();
            for db in 0..=(cap - da) {
                for beta in MultiIndex::of_weight(n, db) {
                    vecs.push((beta.clone(), landau_vector(&alpha, &beta)));
                }
            }
            levels.push((alpha, vecs));
        }
    }
    Ok(LandauDecomposition { n, degree_cap: basis.degree_cap(), levels })
}

impl LandauDecomposition {
    pub fn verify(&self, basis: &Arc<GradedBasis>) -> Result<LandauReport> {
        let n = self.n;
        let mut number_ops = Vec::new();
        for i in 1..=n {
            let (a, a_star) = ladder_matrices(basis, i)?;
            number_ops.push(a_star.compose(&a)?);
        }
        let mut eigen_ok = true;
        let mut all = Vec::new();
        for (alpha, vecs) in &self.levels {
            for (_, v) in vecs {
                for (i, op) in number_ops.iter().enumerate() {
                    let img = op.apply(v)?;
                    eigen_ok &= img == v.scale(&Scalar::from_int(alpha.get(i) as i128));
                }
                all.push(v.clone());
            }
        }
        let mut orthonormal = true;
        for (i, f) in all.iter().enumerate() {
            for (j, g) in all.iter().enumerate().skip(i) {
                let ip = inner_product(f, g);
                orthonormal &= if i == j { ip.is_one() } else { ip.is_zero() };
            }
        }
        let l0_holomorphic = self
            .levels
            .iter()
            .filter(|(a, _)| a.is_zero())
            .flat_map(|(_, v)| v)
            .all(|(_, p)| p.terms().all(|(m, _)| m.anti.is_zero()));
        Ok(LandauReport {
            levels: self.levels.len(),
            total_dim: all.len(),
            basis_dim: basis.len(),
            eigen_ok,
            orthonormal,
            l0_holomorphic,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub checked: usize,
    /// `⟨ρ̃ e_βγ, ρ̃ e_βγ'⟩ = δ_γγ'` and `ρ̃ e_βγ = e_αγ`
    pub isometric: bool,
    /// `ρ̃ e_δγ = 0` for `δ ≠ β`
    pub kills_other_levels: bool,
}

/// Checks that `ρ̃_αβ` maps `L_β` isometrically onto `L_α` and kills the
/// other levels, on the faithful range of the truncation.
pub fn tilde_unitarity(op: &TildeOperator, alpha: &MultiIndex, beta: &MultiIndex) -> Result<UnitarityReport> {
    let basis = op.basis();
    let cap = basis.degree_cap() as u32;
    let upto = op.exactness_degree();
    let mut rep = UnitarityReport { checked: 0, isometric: true, kills_other_levels: true };
    let mut images = Vec::new();
    for dg in 0..=cap {
        for gamma in MultiIndex::of_weight(basis.n(), dg) {
            for dd in 0..=cap.saturating_sub(dg) {
                for delta in MultiIndex::of_weight(basis.n(), dd) {
                    let input_deg = (dg + dd) as i64;
                    if input_deg > upto {
                        continue;
                    }
                    if &delta == beta && alpha.degree() + dg > cap {
                        continue;
                    }
                    let img = op.apply(&landau_vector(&delta, &gamma))?;
                    rep.checked += 1;
                    if &delta == beta {
                        rep.isometric &= img == landau_vector(alpha, &gamma);
                        images.push(img);
                    } else {
                        rep.kills_other_levels &= img.is_zero();
                    }
                }
            }
        }
    }
    for (i, f) in images.iter().enumerate() {
        for (j, g) in images.iter().enumerate() {
            let ip = inner_product(f, g);
            rep.isometric &= if i == j { ip.is_one() } else { ip.is_zero() };
        }
    }
    Ok(rep)
}
