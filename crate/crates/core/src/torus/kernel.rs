//! Level projector kernels against the Laguerre model
//! `(k/2π) E^k(x, y) Q_m(k δ(x, y))`.
//!
//! In the symmetric gauge centred at `y` the model is real. The Landau-gauge
//! kernel differs by `e^{iθ(x)}` with
//! `θ(x) = k y₁ (x₂ − y₂) + (k/2)(x₁ − y₁)(x₂ − y₂)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::levels::LandauProjector;
use crate::error::{Error, Result};
use crate::laguerre::laguerre_q;

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub k: u32,
    pub m: usize,
    /// `max_x |2πΠ(x,x)/k − 1|` over all grid sites
    pub diagonal_error: f64,
    /// `|2π mean Π(x,x)/k − 1|`
    pub diagonal_mean_error: f64,
    /// sup over base points and `|x − y| ≤ Λ/4` of the kernel error
    pub sup_error: f64,
    pub base_points: usize,
    pub compared: usize,
}

/// Landau-gauge model kernel at displacement `(dx, dy)` from the base point `y`.
pub fn model_kernel(k: u32, m: usize, y: (f64, f64), dx: f64, dy: f64) -> Complex64 {
    let kf = k as f64;
    let r2 = dx * dx + dy * dy;
    let q = laguerre_q(m as u32, 0).eval(kf * r2 / 2.0);
    let theta = kf * y.0 * dy + 0.5 * kf * dx * dy;
    Complex64::from_polar(kf / (2.0 * PI) * (-kf * r2 / 4.0).exp() * q, theta)
}

/// Compares `Π_{m,k}` with the model; base points are grid sites at least
/// `Λ/4` away from the chart boundary, taken on a `stride` sublattice.
pub fn kernel_compare(proj: &LandauProjector, stride: usize) -> Result<KernelReport> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    let n = proj.n;
    let h = proj.h;
    let side = n as f64 * h;
    let kf = proj.k as f64;
    let dim = proj.dim();

    let mut diag_max: f64 = 0.0;
    let mut diag_sum = 0.0;
    for i in 0..n * n {
        let d: f64 = (0..dim).map(|c| proj.basis[(i, c)].norm_sqr()).sum::<f64>() / (h * h);
        diag_max = diag_max.max((2.0 * PI * d / kf - 1.0).abs());
        diag_sum += d;
    }
    let diag_mean = diag_sum / (n * n) as f64;

    let radius = side / 4.0;
    let reach = (radius / h).floor() as usize;
    let lo = (side / 4.0 / h).ceil() as usize;
    let hi = ((3.0 * side / 4.0) / h).floor() as usize;
    let mut sup: f64 = 0.0;
    let mut bases = 0;
    let mut compared = 0;
    for bj in (lo..=hi).step_by(stride) {
        for bi in (lo..=hi).step_by(stride) {
            let base = bj * n + bi;
            let y = (bi as f64 * h, bj as f64 * h);
            bases += 1;
            for j in bj - reach..=bj + reach {
                for i in bi - reach..=bi + reach {
                    let dx = (i as f64 - bi as f64) * h;
                    let dy = (j as f64 - bj as f64) * h;
                    if dx * dx + dy * dy > radius * radius || i >= n || j >= n {
                        continue;
                    }
                    let err = (proj.kernel(j * n + i, base) - model_kernel(proj.k, proj.m, y, dx, dy)).norm();
                    sup = sup.max(err);
                    compared += 1;
                }
            }
        }
    }
    Ok(KernelReport {
        k: proj.k,
        m: proj.m,
        diagonal_error: diag_max,
        diagonal_mean_error: (2.0 * PI * diag_mean / kf - 1.0).abs(),
        sup_error: sup,
        base_points: bases,
        compared,
    })
}
