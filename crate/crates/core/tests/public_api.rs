use landau_core::fock::{fock_basis, rho_ab};
use landau_core::poly::MultiIndex;
use landau_core::riemann_roch::{composition_sum, demailly_leading, dim_surface, dim_torus};
use landau_core::torus::toeplitz::{op_norm, toeplitz_fn};
use landau_core::torus::{SolverOptions, TorusGeometry, TorusModel, TrigPoly};
use num_complex::Complex64;
use proptest::prelude::*;

fn index(n: usize, raw: &[u32]) -> MultiIndex {
    MultiIndex::new(raw[..n].to_vec())
}

proptest! {
    #[test]
    fn matrix_units_multiply(n in 1usize..3, a in prop::collection::vec(0u32..3, 2), b in prop::collection::vec(0u32..3, 2),
                             c in prop::collection::vec(0u32..3, 2), d in prop::collection::vec(0u32..3, 2)) {
        let basis = fock_basis(n, 8).unwrap();
        let (a, b, c, d) = (index(n, &a), index(n, &b), index(n, &c), index(n, &d));
        let lhs = rho_ab(&basis, &a, &b).unwrap().compose(&rho_ab(&basis, &c, &d).unwrap()).unwrap();
        let rhs = if b == c { rho_ab(&basis, &a, &d).unwrap() } else { landau_core::operator::FockOperator::zero(&basis) };
        let upto = lhs.common_range(&rhs);
        prop_assert!(lhs.agrees_upto(&rhs, upto));
    }

    #[test]
    fn product_dims_split_over_compositions(k in 1u64..10, d1 in 1u64..5, d2 in 1u64..5, m in 0u32..6) {
        prop_assert_eq!(dim_torus(2, k, &[d1, d2], m).unwrap(), composition_sum(k, &[d1, d2], m));
    }
}

#[test]
fn flat_leading_term_is_exact() {
    for d in 1..5u64 {
        for k in 1..8u64 {
            let lead = demailly_leading(1, 0, 2.0 * std::f64::consts::PI * d as f64, k).unwrap();
            assert!((lead - (k * d) as f64).abs() < 1e-9);
            assert_eq!(dim_surface(k, d, 1, 3).dim, (k * d) as i64);
        }
    }
}

#[test]
fn small_torus_levels_and_toeplitz_operators() {
    let geom = TorusGeometry::new(1).unwrap();
    let model = TorusModel::solve(geom, 3, 30, 1, 0.3, &SolverOptions::default()).unwrap();
    assert_eq!(model.clusters.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![3, 3]);
    let side = geom.side();
    for m in 0..2 {
        let p = model.projector(m).unwrap();
        let one = toeplitz_fn(&model.bundle, &p, &TrigPoly::constant(side, Complex64::new(1.0, 0.0))).unwrap();
        let id = nalgebra::DMatrix::<Complex64>::identity(3, 3);
        assert!(op_norm(&(&one.matrix - id)) < 1e-10);
        let f = TrigPoly::parse(side, "cosx").unwrap().add(&TrigPoly::parse(side, "sin2y").unwrap().scale(Complex64::new(0.0, 1.0)));
        let tf = toeplitz_fn(&model.bundle, &p, &f).unwrap();
        let tfc = toeplitz_fn(&model.bundle, &p, &f.conj()).unwrap();
        assert!(op_norm(&(tf.matrix.adjoint() - tfc.matrix)) < 1e-10);
    }
}
