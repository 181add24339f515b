//! Dimensions of Landau levels from Riemann-Roch, and their leading
//! asymptotics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::poly::MultiIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// every degree met in the induction is positive
    Guaranteed,
    /// the formula is only conjectural at this `k`
    NotGuaranteed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimReport {
    pub geometry: String,
    pub k: u64,
    pub m: u32,
    pub dim: i64,
    pub leading: f64,
    pub regime: Regime,
    /// smallest `k` putting this level in the guaranteed regime
    pub threshold_k: u64,
}

/// Smallest `k ≥ 1` with `k·d + (j+1)χ > 0` for every `j ≤ m`.
pub fn threshold_k(d: u64, genus: u32, m: u32) -> u64 {
    let chi = 2 - 2 * genus as i64;
    if chi >= 0 || d == 0 {
        return 1;
    }
    let need = -(m as i64 + 1) * chi; // k·d > need
    (need as u64) / d + 1
}

/// `k·d + (½ + m)(2 − 2g)`.
pub fn dim_surface(k: u64, d: u64, genus: u32, m: u32) -> DimReport {
    let chi = 2 - 2 * genus as i64;
    let kd = (k * d) as i64;
    let dim = kd + chi / 2 + m as i64 * chi;
    let thr = threshold_k(d, genus, m);
    DimReport {
        geometry: format!("surface g={genus} d={d}"),
        k,
        m,
        dim,
        leading: kd as f64,
        regime: if k >= thr { Regime::Guaranteed } else { Regime::NotGuaranteed },
        threshold_k: thr,
    }
}

/// `binom(m+n−1, n−1) kⁿ Π d_i` for the flat torus `Π T²_{d_i}`.
pub fn dim_torus(n: usize, k: u64, d_list: &[u64], m: u32) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if d_list.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: d_list.len() });
    }
    let rank = binomial(m as u64 + n as u64 - 1, n as u64 - 1);
    let kn = (k as i128).pow(n as u32);
    Ok(rank * kn * d_list.iter().map(|&d| d as i128).product::<i128>())
}

/// `(k/2π)ⁿ binom(m+n−1, n−1) vol`.
pub fn demailly_leading(n: usize, m: u32, vol: f64, k: u64) -> Result<f64> {
    if !(vol > 0.0) {
        return Err(Error::InvalidArgument(format!("volume must be positive, got {vol}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let rank = binomial(m as u64 + n as u64 - 1, n as u64 - 1) as f64;
    Ok((k as f64 / (2.0 * std::f64::consts::PI)).powi(n as i32) * rank * vol)
}

/// `Σ_{|α|=m} Π_i dim_surface(k, d_i, g=1, α_i)`: the level-`m` space of a
/// product of tori splits over the ways of distributing `m` among factors.
pub fn composition_sum(k: u64, d_list: &[u64], m: u32) -> i128 {
    MultiIndex::of_weight(d_list.len(), m)
        .iter()
        .map(|alpha| {
            d_list
                .iter()
                .enumerate()
                .map(|(i, &d)| dim_surface(k, d, 1, alpha.get(i)).dim as i128)
                .product::<i128>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn surface_examples() {
        assert_eq!(dim_surface(5, 3, 1, 2).dim, 15);
        assert_eq!(dim_surface(1, 4, 0, 1).dim, 7);
        assert_eq!(dim_surface(1, 10, 2, 1).dim, 7);
    }

    #[test]
    fn threshold_flags() {
        // genus 3, d = 1, m = 0: need k > 4
        let r = dim_surface(4, 1, 3, 0);
        assert_eq!(r.threshold_k, 5);
        assert_eq!(r.regime, Regime::NotGuaranteed);
        assert_eq!(dim_surface(5, 1, 3, 0).regime, Regime::Guaranteed);
    }

    #[test]
    fn torus_examples() {
        assert_eq!(dim_torus(1, 7, &[2], 3).unwrap(), 14);
        assert_eq!(dim_torus(2, 3, &[1, 1], 1).unwrap(), 18);
        assert_eq!(dim_torus(3, 2, &[1, 2, 3], 0).unwrap(), 48);
        assert!(dim_torus(2, 3, &[1], 0).is_err());
    }

    #[test]
    fn leading_term() {
        let vol = 2.0 * std::f64::consts::PI * 3.0;
        assert!((demailly_leading(1, 4, vol, 5).unwrap() - 15.0).abs() < 1e-12);
        assert!(demailly_leading(1, 0, 0.0, 5).is_err());
        // sphere: dim/leading → 1
        let ratio = |k: u64| dim_surface(k, 4, 0, 1).dim as f64 / (k * 4) as f64;
        assert!((ratio(1000) - 1.0).abs() < (ratio(10) - 1.0).abs());
    }

    #[test]
    fn agrees_with_surface_multiplicity() {
        use crate::exact::Rational;
        use crate::surface::{landau_multiplicity, SurfaceGeometry};
        for (genus, d, k, m) in [(0u32, 4u64, 1u64, 1u32), (2, 5, 2, 1), (0, 3, 7, 4), (1, 2, 9, 6)] {
            let a = Rational::from_integer(if genus == 1 { 1 } else { (2 * genus as i128 - 2).abs().max(2) });
            let b = Rational::from_integer((k * d) as i128) / a;
            let g = SurfaceGeometry::new(genus, b, a).unwrap();
            assert_eq!(landau_multiplicity(&g, m).unwrap(), dim_surface(k, d, genus, m).dim);
        }
    }

    proptest! {
        #[test]
        fn product_tori_split(k in 1u64..8, d1 in 1u64..4, d2 in 1u64..4, m in 0u32..6) {
            prop_assert_eq!(composition_sum(k, &[d1, d2], m), dim_torus(2, k, &[d1, d2], m).unwrap());
        }
    }
}
