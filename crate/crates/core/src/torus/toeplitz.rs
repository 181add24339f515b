//! Berezin-Toeplitz operators compressed to a level basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bundle::DiscreteBundle;
use super::levels::LandauProjector;
use super::trig::{TrigPoly, VectorField};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ToeplitzMatrix {
    pub m: usize,
    pub k: u32,
    pub symbol: String,
    pub matrix: DMatrix<Complex64>,
}

impl ToeplitzMatrix {
    pub fn norm(&self) -> f64 {
        op_norm(&self.matrix)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

/// Largest singular value.
pub fn op_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Values of `f` at the grid sites.
pub fn sample(bundle: &DiscreteBundle, f: &TrigPoly) -> Result<Vec<Complex64>> {
    let side = bundle.geometry().side();
    if (f.side() - side).abs() > 1e-12 * side {
        return Err(Error::NotPeriodic(format!(
            "polynomial has period {} but the torus side is {side}",
            f.side()
        )));
    }
    Ok((0..bundle.dim())
        .map(|i| {
            let (x, y) = bundle.point(i);
            f.eval(x, y)
        })
        .collect())
}

/// Centered `∇_X ψ`.
pub fn covariant(bundle: &DiscreteBundle, field: &VectorField, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    let cx = sample(bundle, &field.x)?;
    let cy = sample(bundle, &field.y)?;
    let dx = bundle.nabla_x(psi);
    let dy = bundle.nabla_y(psi);
    Ok((0..psi.len()).map(|i| cx[i] * dx[i] + cy[i] * dy[i]).collect())
}

/// `⟨φ_i, f φ_j⟩`
pub fn toeplitz_fn(bundle: &DiscreteBundle, proj: &LandauProjector, f: &TrigPoly) -> Result<ToeplitzMatrix> {
    let vals = sample(bundle, f)?;
    let mut fb = proj.basis.clone();
    for (r, mut row) in fb.row_iter_mut().enumerate() {
        row *= vals[r];
    }
    Ok(ToeplitzMatrix {
        m: proj.m,
        k: proj.k,
        symbol: f.to_string(),
        matrix: proj.basis.adjoint() * fb,
    })
}

/// `k^{-p} Π ∇_{X₁} ⋯ ∇_{X_{2p}} Π` on the level basis.
pub fn toeplitz_der(bundle: &DiscreteBundle, proj: &LandauProjector, fields: &[VectorField]) -> Result<ToeplitzMatrix> {
    if fields.len() % 2 == 1 {
        return Err(Error::OddFieldCount(fields.len()));
    }
    let p = fields.len() / 2;
    let dim = proj.dim();
    let mut image = DMatrix::zeros(bundle.dim(), dim);
    for c in 0..dim {
        let mut psi: Vec<Complex64> = proj.basis.column(c).iter().copied().collect();
        for field in fields.iter().rev() {
            psi = covariant(bundle, field, &psi)?;
        }
        image.set_column(c, &nalgebra::DVector::from_vec(psi));
    }
    let scale = (bundle.k() as f64).powi(-(p as i32));
    Ok(ToeplitzMatrix {
        m: proj.m,
        k: proj.k,
        symbol: format!("derivative of order {}", fields.len()),
        matrix: proj.basis.adjoint() * image * Complex64::new(scale, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{SolverOptions, TorusGeometry, TorusModel};

    fn model() -> TorusModel {
        TorusModel::solve(TorusGeometry::new(1).unwrap(), 3, 30, 1, 0.3, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn unit_and_adjoint() {
        let md = model();
        let side = md.bundle.geometry().side();
        let p = md.projector(0).unwrap();
        let one = toeplitz_fn(&md.bundle, &p, &TrigPoly::constant(side, Complex64::new(1.0, 0.0))).unwrap();
        let id = DMatrix::<Complex64>::identity(p.dim(), p.dim());
        assert!((one.matrix - id).iter().all(|z| z.norm() < 1e-10));
        let f = TrigPoly::cos_x(side, 1).add(&TrigPoly::sin_y(side, 1).scale(Complex64::new(0.0, 1.0)));
        let t = toeplitz_fn(&md.bundle, &p, &f).unwrap().matrix;
        let tc = toeplitz_fn(&md.bundle, &p, &f.conj()).unwrap().matrix;
        assert!((t.adjoint() - tc).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn derivative_guards() {
        let md = model();
        let side = md.bundle.geometry().side();
        let p = md.projector(0).unwrap();
        let x = VectorField::constant(side, 1.0, 0.0);
        assert!(matches!(toeplitz_der(&md.bundle, &p, std::slice::from_ref(&x)), Err(Error::OddFieldCount(1))));
        let z = VectorField::constant(side, 0.0, 0.0);
        let t = toeplitz_der(&md.bundle, &p, &[x, z]).unwrap();
        assert!(t.matrix.iter().all(|c| c.norm() == 0.0));
        let wrong = TrigPoly::cos_x(side * 1.5, 1);
        assert!(matches!(toeplitz_fn(&md.bundle, &p, &wrong), Err(Error::NotPeriodic(_))));
    }
}
