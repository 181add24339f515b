//! Log-log least-squares fits for `O(k^p)` claims.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub expected: f64,
    pub band: f64,
    pub pass: bool,
}

/// Fits `log v = slope · log k + intercept`; passes iff `|slope − expected| ≤ band`.
pub fn fit_slope(pairs: &[(f64, f64)], expected: f64, band: f64) -> Result<SlopeFit> {
    if pairs.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "slope fit needs at least 4 points, got {}",
            pairs.len()
        )));
    }
    for &(k, v) in pairs {
        if !(k > 0.0) || !(v > 0.0) {
            return Err(Error::NonPositive { k, value: v });
        }
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all k values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    // constant data fit perfectly with slope 0
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(SlopeFit {
        pairs: pairs.to_vec(),
        slope,
        intercept,
        r_squared,
        expected,
        band,
        pass: (slope - expected).abs() <= band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const KS: [f64; 5] = [4.0, 6.0, 8.0, 10.0, 12.0];

    #[test]
    fn exact_power_law() {
        let pairs: Vec<_> = KS.iter().map(|&k| (k, 3.0 * k.powi(-2))).collect();
        let f = fit_slope(&pairs, -2.0, 0.3).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.pass);
    }

    #[test]
    fn constant_data() {
        let pairs: Vec<_> = KS.iter().map(|&k| (k, 0.7)).collect();
        let f = fit_slope(&pairs, 0.0, 0.1).unwrap();
        assert!(f.slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pairs: Vec<_> = KS
            .iter()
            .map(|&k| (k, (1.0 + rng.gen_range(-0.1..0.1)) / k))
            .collect();
        let f = fit_slope(&pairs, -1.0, 0.2).unwrap();
        assert!(f.pass, "slope {}", f.slope);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)], 0.0, 1.0).is_err());
        let bad = [(4.0, 1.0), (6.0, 0.0), (8.0, 1.0), (10.0, 1.0)];
        assert!(matches!(fit_slope(&bad, 0.0, 1.0), Err(Error::NonPositive { .. })));
    }
}
