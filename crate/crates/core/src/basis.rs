//! Graded monomial bases of truncated polynomial spaces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// monomials `z̄^α`, spanning `D(ℂⁿ)`
    Antiholomorphic,
    /// monomials `z^a z̄^b`, spanning `P(ℂⁿ)`
    Full,
}

/// Ordered monomial basis of all monomials of total degree `≤ degree_cap`.
///
/// Ordering is by total degree, then descending lexicographic order of the
/// exponent vector `(a, b)`, so `z̄₁` precedes `z̄₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    n: usize,
    degree_cap: usize,
    kind: BasisKind,
    elems: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

pub fn enumerate_basis(n: usize, degree_cap: i64, kind: BasisKind) -> Result<GradedBasis> {
    if n == 0 {
        return Err(Error::InvalidArgument("basis dimension n must be >= 1".into()));
    }
    if degree_cap < 0 {
        return Err(Error::InvalidArgument(format!(
            "degree cap must be >= 0, got {degree_cap}"
        )));
    }
    let cap = degree_cap as usize;
    let mut elems = Vec::new();
    for d in 0..=cap as u32 {
        match kind {
            BasisKind::Antiholomorphic => {
                for a in MultiIndex::of_weight(n, d) {
                    elems.push(Monomial::antiholomorphic(a));
                }
            }
            BasisKind::Full => {
                for e in MultiIndex::of_weight(2 * n, d) {
                    let (h, a) = e.entries().split_at(n);
                    elems.push(Monomial::new(
                        MultiIndex::new(h.to_vec()),
                        MultiIndex::new(a.to_vec()),
                    ));
                }
            }
        }
    }
    let index = elems
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    Ok(GradedBasis {
        n,
        degree_cap: cap,
        kind,
        elems,
        index,
    })
}

impl GradedBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.elems[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.elems
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of `z̄^α` in an antiholomorphic or full basis.
    pub fn index_of_anti(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index_of(&Monomial::antiholomorphic(alpha.clone()))
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.elems[i].degree() as usize
    }

    /// Same space, same cap: operators on the two bases may be combined.
    pub fn compatible(&self, other: &Self) -> bool {
        self.n == other.n && self.degree_cap == other.degree_cap && self.kind == other.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_antiholomorphic_bases() {
        let b = enumerate_basis(1, 2, BasisKind::Antiholomorphic).unwrap();
        let names: Vec<String> = b.monomials().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1", "zb1", "zb1^2"]);

        let b = enumerate_basis(2, 1, BasisKind::Antiholomorphic).unwrap();
        let names: Vec<String> = b.monomials().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1", "zb1", "zb2"]);
    }

    #[test]
    fn full_basis_counts_lattice_points() {
        let b = enumerate_basis(1, 2, BasisKind::Full).unwrap();
        // #{(a, b) : a + b <= 2}
        let brute = (0..=2).flat_map(|a| (0..=2).map(move |b| (a, b))).filter(|(a, b)| a + b <= 2).count();
        assert_eq!(b.len(), brute);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(enumerate_basis(0, 2, BasisKind::Full).is_err());
        assert!(enumerate_basis(1, -1, BasisKind::Full).is_err());
    }

    #[test]
    fn index_maps_are_inverse() {
        for kind in [BasisKind::Antiholomorphic, BasisKind::Full] {
            let b = enumerate_basis(2, 5, kind).unwrap();
            for (i, m) in b.monomials().iter().enumerate() {
                assert_eq!(b.index_of(m), Some(i));
            }
            let degrees: Vec<usize> = (0..b.len()).map(|i| b.degree_of(i)).collect();
            assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
