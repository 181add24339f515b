//! The exact identity suite of the symbol algebra, run in rational mode.

use std::sync::Arc;

use serde::Serialize;

use crate::bargmann::{
    antiholomorphic_trace, full_basis, op_compose_law, op_kernel, op_of, p_ab, tilde_unitarity, TildeFactory,
};
use crate::basis::GradedBasis;
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::fock::{fock_basis, ladder_matrices, pi_m, rho_ab, rho_tangent, TangentVector};
use crate::laguerre::{laguerre_q, laguerre_sum_identity};
use crate::operator::{FockOperator, Parity};
use crate::poly::{Monomial, MultiIndex, PolyZZbar};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub n: usize,
    pub degree_cap: usize,
    pub cases: usize,
    pub failures: usize,
    /// largest entry of any difference, as a float
    pub residual: f64,
}

impl IdentityCheck {
    fn new(name: &str, n: usize, degree_cap: usize) -> Self {
        Self { name: name.into(), n, degree_cap, cases: 0, failures: 0, residual: 0.0 }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn compare(&mut self, lhs: &FockOperator, rhs: &FockOperator) {
        let upto = lhs.common_range(rhs);
        self.residual = self.residual.max(lhs.residual_upto(rhs, upto));
        self.record(lhs.agrees_upto(rhs, upto));
    }

    pub fn pass(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Sizes of the sub-suites; the defaults keep the whole run under a few seconds.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    /// checks run for every `n ≤ n_max`, which must be 1 or 2
    pub n_max: usize,
    pub degree_cap: usize,
    /// largest `|α|` in the exhaustive `ρ_αβ ρ_γδ` products for `n = 2`
    pub rel_weight_n2: u32,
    /// truncation of the full polynomial space for the `ρ̃` checks, per `n`
    pub tilde_cap: [usize; 2],
    /// largest `|α| + |β|` in the `ρ̃` checks, per `n`
    pub tilde_weight: [u32; 2],
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n_max: 2, degree_cap: 8, rel_weight_n2: 5, tilde_cap: [8, 6], tilde_weight: [6, 4] }
    }
}

fn indices_upto(n: usize, w: u32) -> Vec<MultiIndex> {
    (0..=w).flat_map(|d| MultiIndex::of_weight(n, d)).collect()
}

fn rel_u(basis: &Arc<GradedBasis>, w: u32) -> Result<IdentityCheck> {
    let n = basis.n();
    let mut chk = IdentityCheck::new("rho products", n, basis.degree_cap());
    let idx = indices_upto(n, w);
    let rho: Vec<Vec<FockOperator>> = idx
        .iter()
        .map(|a| idx.iter().map(|b| rho_ab(basis, a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let zero = FockOperator::zero(basis);
    for a in 0..idx.len() {
        for b in 0..idx.len() {
            chk.compare(&rho[a][b].adjoint()?, &rho[b][a]);
            for c in 0..idx.len() {
                for d in 0..idx.len() {
                    let lhs = rho[a][b].compose(&rho[c][d])?;
                    let rhs = if b == c { &rho[a][d] } else { &zero };
                    chk.compare(&lhs, rhs);
                }
            }
        }
    }
    Ok(chk)
}

fn parity_table(basis: &Arc<GradedBasis>) -> Result<IdentityCheck> {
    let n = basis.n();
    let mut chk = IdentityCheck::new("parity", n, basis.degree_cap());
    let idx = indices_upto(n, basis.degree_cap() as u32);
    for a in &idx {
        for b in &idx {
            let want = if (a.degree() + b.degree()) % 2 == 0 { Parity::Even } else { Parity::Odd };
            chk.record(rho_ab(basis, a, b)?.parity() == want);
        }
    }
    for i in 0..n {
        for t in [TangentVector::d_x(n, i), TangentVector::d_y(n, i)] {
            chk.record(t.rho(basis)?.parity() == Parity::Odd);
        }
    }
    let x = TangentVector::d_x(n, 0).rho(basis)?;
    chk.record(x.compose(&x)?.parity() == Parity::Even);
    Ok(chk)
}

fn projector_sums(basis: &Arc<GradedBasis>) -> Result<IdentityCheck> {
    let n = basis.n();
    let mut chk = IdentityCheck::new("pi_m as sum of rho_aa", n, basis.degree_cap());
    for m in 0..=basis.degree_cap() {
        let mut sum = FockOperator::zero(basis);
        for a in MultiIndex::of_weight(n, m as u32) {
            sum = sum.add(&rho_ab(basis, &a, &a)?)?;
        }
        chk.compare(&sum, &pi_m(basis, m)?);
    }
    Ok(chk)
}

fn bosonic(basis: &Arc<GradedBasis>) -> Result<IdentityCheck> {
    let n = basis.n();
    let mut chk = IdentityCheck::new("bosonic commutators", n, basis.degree_cap());
    let ladders: Vec<_> = (1..=n).map(|i| ladder_matrices(basis, i)).collect::<Result<_>>()?;
    let id = FockOperator::identity(basis);
    let zero = FockOperator::zero(basis);
    for (i, (ai, ai_s)) in ladders.iter().enumerate() {
        for (j, (aj, aj_s)) in ladders.iter().enumerate() {
            chk.compare(&ai.commutator(aj_s)?, if i == j { &id } else { &zero });
            chk.compare(&ai.commutator(aj)?, &zero);
            chk.compare(&ai_s.commutator(aj_s)?, &zero);
        }
    }
    // ρ(U_i) = −a_i*, ρ(Ū_i) = a_i
    for (i, (a, a_s)) in ladders.iter().enumerate() {
        let mut u = vec![Scalar::zero(); n];
        let v = u.clone();
        u[i] = Scalar::one();
        chk.compare(&rho_tangent(basis, &u, &v)?, &a_s.scale(&Scalar::from_int(-1)));
        chk.compare(&rho_tangent(basis, &v, &u)?, a);
    }
    Ok(chk)
}

fn tilde_checks(n: usize, cap: usize, weight: u32) -> Result<[IdentityCheck; 2]> {
    let basis = full_basis(n, cap as i64)?;
    let mut factory = TildeFactory::new(&basis)?;
    let mut unit = IdentityCheck::new("tilde rho unitarity", n, cap);
    let mut kern = IdentityCheck::new("Op(p_ab) = tilde rho_ab", n, cap);
    let idx = indices_upto(n, weight);
    for a in &idx {
        for b in &idx {
            if a.degree() + b.degree() > weight {
                continue;
            }
            let t = factory.tilde_rho(a, b)?;
            let rep = tilde_unitarity(&t, a, b)?;
            unit.record(rep.isometric && rep.kills_other_levels);
            kern.compare(&op_kernel(&basis, &p_ab(a, b))?, &t);
            kern.compare(&op_of(&mut factory, &p_ab(a, b))?, &t);
        }
    }
    Ok([unit, kern])
}

fn sample_symbols(n: usize) -> Vec<PolyZZbar> {
    let mono = |h: Vec<u32>, a: Vec<u32>| PolyZZbar::monomial(Monomial::new(MultiIndex::new(h), MultiIndex::new(a)));
    let e = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let zero = vec![0; n];
    let last = n - 1;
    vec![
        PolyZZbar::one(n),
        mono(e(0), zero.clone()),
        mono(zero.clone(), e(last)),
        mono(e(0), e(last)).add(&PolyZZbar::constant(n, Scalar::from_int(2))),
        p_ab(&MultiIndex::new(e(last)), &MultiIndex::new(e(0))),
    ]
}

fn compose_and_trace(n: usize, cap: usize) -> Result<[IdentityCheck; 2]> {
    let basis = full_basis(n, cap as i64)?;
    let mut factory = TildeFactory::new(&basis)?;
    let mut comp = IdentityCheck::new("Op composition law", n, cap);
    let mut trace = IdentityCheck::new("trace law", n, cap);
    let symbols = sample_symbols(n);
    for f in &symbols {
        for g in &symbols {
            let rep = op_compose_law(&mut factory, f, g)?;
            comp.residual = comp.residual.max(rep.residual);
            comp.record(rep.exact);
        }
        let t = antiholomorphic_trace(&op_of(&mut factory, f)?)?;
        let want = f.at_origin();
        trace.residual = trace.residual.max((t.clone() - want.clone()).to_c64().norm());
        trace.record(t == want);
    }
    Ok([comp, trace])
}

fn laguerre_checks(cap: usize) -> [IdentityCheck; 2] {
    let mut sum = IdentityCheck::new("Laguerre sum identity", 2, cap);
    for m in 0..=cap as u32 {
        for n in 1..=2 {
            let r = laguerre_sum_identity(m, n);
            sum.residual = sum.residual.max(r.residual);
            sum.record(r.equal);
        }
    }
    let mut pmm = IdentityCheck::new("p_mm = Q_m(|z|^2)", 1, cap);
    for m in 0..=cap as u32 {
        let a = MultiIndex::new(vec![m]);
        pmm.record(p_ab(&a, &a) == laguerre_q(m, 0).of_modulus_squared());
    }
    [sum, pmm]
}

/// Runs every check for `n = 1..=n_max`.
pub fn exact_suite(cfg: &SuiteConfig) -> Result<Vec<IdentityCheck>> {
    if !(1..=2).contains(&cfg.n_max) {
        return Err(Error::InvalidArgument(format!("identity suite supports n = 1, 2; got {}", cfg.n_max)));
    }
    let d = cfg.degree_cap;
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        let basis = fock_basis(n, d as i64)?;
        let w = if n == 1 { d as u32 } else { cfg.rel_weight_n2.min(d as u32) };
        out.push(rel_u(&basis, w)?);
        out.push(parity_table(&basis)?);
        out.push(projector_sums(&basis)?);
        out.push(bosonic(&basis)?);
        let cap = cfg.tilde_cap[n - 1].min(d);
        out.extend(tilde_checks(n, cap, cfg.tilde_weight[n - 1].min(cap as u32))?);
        out.extend(compose_and_trace(n, cap)?);
    }
    out.extend(laguerre_checks(d));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { n_max: 2, degree_cap: 3, rel_weight_n2: 2, tilde_cap: [4, 2], tilde_weight: [2, 1] };
        for c in exact_suite(&cfg).unwrap() {
            assert!(c.pass(), "{c:?}");
            assert_eq!(c.residual, 0.0);
        }
    }
}
