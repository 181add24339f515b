//! Product, commutator and `B₁` defects of Toeplitz operators across `k`.

use num_complex::Complex64;
use serde::Serialize;

use super::toeplitz::{op_norm, toeplitz_der, toeplitz_fn};
use super::trig::{b1, hamiltonian_vf, poisson, TrigPoly};
use super::{GridPolicy, SolverOptions, TorusGeometry, TorusModel};
use crate::error::Result;
use crate::slope::{fit_slope, SlopeFit};

#[derive(Clone, Debug, Serialize)]
pub struct DefectRow {
    pub k: u32,
    pub m: usize,
    pub grid: usize,
    pub flux: f64,
    /// `‖T(f)T(g) − T(fg) − k⁻¹T(X,Y)‖`
    pub product: f64,
    /// `‖ik[T(f),T(g)] − T({f,g})‖`
    pub commutator: f64,
    /// `‖T(f)T(g) − T(fg) − k⁻¹T(B₁(f,g))‖`
    pub b1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectFits {
    pub m: usize,
    pub product: SlopeFit,
    pub commutator: SlopeFit,
    pub b1: SlopeFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectTable {
    pub rows: Vec<DefectRow>,
    pub fits: Vec<DefectFits>,
}

impl DefectTable {
    pub fn pass(&self) -> bool {
        self.fits.iter().all(|f| f.product.pass && f.commutator.pass && f.b1.pass)
    }
}

/// Defects of one solved model on level `m`.
pub fn defects_at(model: &TorusModel, f: &TrigPoly, g: &TrigPoly, m: usize) -> Result<DefectRow> {
    let b = &model.bundle;
    let p = model.projector(m)?;
    let kf = model.k() as f64;
    let tf = toeplitz_fn(b, &p, f)?.matrix;
    let tg = toeplitz_fn(b, &p, g)?.matrix;
    let tfg = toeplitz_fn(b, &p, &f.mul(g))?.matrix;
    let txy = toeplitz_der(b, &p, &[hamiltonian_vf(f), hamiltonian_vf(g)])?.matrix;
    let tb1 = toeplitz_fn(b, &p, &b1(f, g, m))?.matrix;
    let tpb = toeplitz_fn(b, &p, &poisson(f, g))?.matrix;
    let base = &tf * &tg - &tfg;
    let inv_k = Complex64::new(1.0 / kf, 0.0);
    let comm = (&tf * &tg - &tg * &tf) * Complex64::new(0.0, kf) - tpb;
    Ok(DefectRow {
        k: model.k(),
        m,
        grid: b.n(),
        flux: b.plaquette_flux(),
        product: op_norm(&(&base - &txy * inv_k)),
        commutator: op_norm(&comm),
        b1: op_norm(&(&base - &tb1 * inv_k)),
    })
}

/// Runs [`defects_at`] for every `k` and level, then fits log-log slopes
/// against `−2`, `−1` and `−2` with bands `0.3`, `0.3`, `0.4`.
#[allow(clippy::too_many_arguments)]
pub fn asymptotic_defects(
    geom: TorusGeometry,
    f: &TrigPoly,
    g: &TrigPoly,
    levels: &[usize],
    k_list: &[u32],
    policy: GridPolicy,
    flux_limit: f64,
    opts: &SolverOptions,
) -> Result<DefectTable> {
    let m_max = levels.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();
    for &k in k_list {
        let model = TorusModel::solve(geom, k, policy.grid(geom, k), m_max, flux_limit, opts)?;
        for &m in levels {
            rows.push(defects_at(&model, f, g, m)?);
        }
    }
    let mut fits = Vec::new();
    for &m in levels {
        let pick = |sel: fn(&DefectRow) -> f64| -> Vec<(f64, f64)> {
            rows.iter().filter(|r| r.m == m).map(|r| (r.k as f64, sel(r))).collect()
        };
        fits.push(DefectFits {
            m,
            product: fit_slope(&pick(|r| r.product), -2.0, 0.3)?,
            commutator: fit_slope(&pick(|r| r.commutator), -1.0, 0.3)?,
            b1: fit_slope(&pick(|r| r.b1), -2.0, 0.4)?,
        });
    }
    Ok(DefectTable { rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_symbols_have_no_defect() {
        let geom = TorusGeometry::new(1).unwrap();
        let md = TorusModel::solve(geom, 3, 30, 1, 0.3, &SolverOptions::default()).unwrap();
        let side = geom.side();
        let c = TrigPoly::constant(side, Complex64::new(2.0, 0.0));
        let g = TrigPoly::sin_y(side, 1);
        for m in 0..2 {
            let r = defects_at(&md, &c, &g, m).unwrap();
            assert!(r.product < 1e-9 && r.commutator < 1e-8 && r.b1 < 1e-9, "{r:?}");
        }
    }
}
