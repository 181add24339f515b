//! Ladder maps `H_{m,k} → H_{0,k}` built from the `(0,1)` covariant
//! derivative, and the angle between `H_{m,k}` and `(∇_z)^m H_{0,k}`.
//!
//! `V = (m!)^{-1/2} k^{-m/2} Π₀ (∇_z̄)^m` restricted to `H_{m,k}`. With
//! `[∇_z, ∇_z̄] = k` this is an isometry in the continuum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bundle::DiscreteBundle;
use super::levels::LandauProjector;
use super::toeplitz::op_norm;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Differencing {
    Centered,
    Forward,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub k: u32,
    pub m: usize,
    pub scheme: Differencing,
    /// `‖V*V − I‖` on `H_{m,k}`
    pub isometry_defect: f64,
    /// `‖VV* − I‖` on `H_{0,k}`
    pub coisometry_defect: f64,
    /// principal angles between `H_{m,k}` and `(∇_z)^m H_{0,k}`, ascending
    pub angles: Vec<f64>,
}

impl LadderReport {
    pub fn max_angle(&self) -> f64 {
        self.angles.last().copied().unwrap_or(0.0)
    }
}

/// `∇_z ψ` (`holomorphic = true`) or `∇_z̄ ψ`.
fn nabla_complex(b: &DiscreteBundle, psi: &[Complex64], holomorphic: bool, scheme: Differencing) -> Vec<Complex64> {
    let (dx, dy) = match scheme {
        Differencing::Centered => (b.nabla_x(psi), b.nabla_y(psi)),
        Differencing::Forward => b.nabla_forward(psi),
    };
    let s = if holomorphic { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    dx.iter().zip(&dy).map(|(a, c)| (a + s * c) * r).collect()
}

fn apply_power(b: &DiscreteBundle, basis: &DMatrix<Complex64>, m: usize, holomorphic: bool, scheme: Differencing) -> DMatrix<Complex64> {
    let mut out = basis.clone();
    for _ in 0..m {
        for mut col in out.column_iter_mut() {
            let v: Vec<Complex64> = col.iter().copied().collect();
            let w = nabla_complex(b, &v, holomorphic, scheme);
            col.copy_from_slice(&w);
        }
    }
    out
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

pub fn ladder_map(
    bundle: &DiscreteBundle,
    level0: &LandauProjector,
    level_m: &LandauProjector,
    scheme: Differencing,
) -> Result<LadderReport> {
    if level0.m != 0 {
        return Err(Error::InvalidArgument(format!("target level must be 0, got {}", level0.m)));
    }
    let m = level_m.m;
    let k = bundle.k() as f64;
    let scale = Complex64::new((factorial(m) * k.powi(m as i32)).sqrt().recip(), 0.0);
    let lowered = apply_power(bundle, &level_m.basis, m, false, scheme);
    let v = level0.basis.adjoint() * lowered * scale;
    let id_m = DMatrix::<Complex64>::identity(level_m.dim(), level_m.dim());
    let id_0 = DMatrix::<Complex64>::identity(level0.dim(), level0.dim());
    let isometry_defect = op_norm(&(v.adjoint() * &v - id_m));
    let coisometry_defect = op_norm(&(&v * v.adjoint() - id_0));

    let raised = apply_power(bundle, &level0.basis, m, true, scheme);
    let svd = raised.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-8 * smax) {
        return Err(Error::RankDeficient(format!(
            "(∇_z)^{m} H_0 has singular values down to {smin:.3e} (max {smax:.3e})"
        )));
    }
    let q = raised.qr().q();
    let cos = (level_m.basis.adjoint() * q).singular_values();
    let mut angles: Vec<f64> = cos.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
    angles.sort_by(f64::total_cmp);
    Ok(LadderReport {
        k: bundle.k(),
        m,
        scheme,
        isometry_defect,
        coisometry_defect,
        angles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{SolverOptions, TorusGeometry, TorusModel};

    #[test]
    fn level_zero_is_trivial() {
        let md = TorusModel::solve(TorusGeometry::new(1).unwrap(), 3, 30, 1, 0.3, &SolverOptions::default()).unwrap();
        let p0 = md.projector(0).unwrap();
        let r = ladder_map(&md.bundle, &p0, &p0, Differencing::Centered).unwrap();
        assert!(r.isometry_defect < 1e-10 && r.coisometry_defect < 1e-10);
        assert!(r.max_angle() < 1e-6);
    }

    #[test]
    fn first_level_is_nearly_isometric() {
        let md = TorusModel::solve(TorusGeometry::new(1).unwrap(), 3, 30, 1, 0.3, &SolverOptions::default()).unwrap();
        let r = ladder_map(&md.bundle, &md.projector(0).unwrap(), &md.projector(1).unwrap(), Differencing::Centered).unwrap();
        assert!(r.isometry_defect < 0.2, "{r:?}");
        assert!(r.max_angle() < 0.2, "{r:?}");
    }
}
