//! Landau levels of compact surfaces with constant Gauss curvature.
//!
//! Areas are stored as `a = A/(2π)`, which keeps Gauss-Bonnet (`S·a = χ`)
//! and the degree `d = B·a` in exact rational arithmetic.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rational;

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceGeometry {
    pub genus: u32,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub s: Rational,
    /// area divided by `2π`
    #[serde(serialize_with = "ser_rational")]
    pub area_over_2pi: Rational,
    pub degree: i64,
    /// `Some(r)` when the line bundle is `K^r`
    pub canonical_power: Option<u32>,
}

impl SurfaceGeometry {
    /// Constant curvature metric of area `2π·a` on the genus-`g` surface.
    pub fn new(genus: u32, b: Rational, area_over_2pi: Rational) -> Result<Self> {
        if !b.is_positive() {
            return Err(Error::InvalidArgument(format!("B must be positive, got {b}")));
        }
        if !area_over_2pi.is_positive() {
            return Err(Error::InvalidArgument("area must be positive".into()));
        }
        let chi = 2 - 2 * genus as i128;
        let s = Rational::from_integer(chi) / area_over_2pi;
        let d = b * area_over_2pi;
        if !d.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "degree B·A/2π = {d} is not an integer"
            )));
        }
        Ok(Self {
            genus,
            b,
            s,
            area_over_2pi,
            degree: d.to_integer() as i64,
            canonical_power: None,
        })
    }

    /// `L = K^r` on a hyperbolic surface normalised to `S = −1`.
    pub fn canonical_power(genus: u32, r: u32) -> Result<Self> {
        if genus < 2 || r == 0 {
            return Err(Error::InvalidArgument("K^r needs genus >= 2 and r >= 1".into()));
        }
        let a = Rational::from_integer(2 * genus as i128 - 2);
        let mut g = Self::new(genus, Rational::from_integer(r as i128), a)?;
        g.canonical_power = Some(r);
        Ok(g)
    }

    /// Unit round sphere (`S = 1`, area `4π`) carrying a bundle of degree `d`.
    pub fn sphere(d: u32) -> Result<Self> {
        Self::new(0, Rational::new(d as i128, 2), Rational::from_integer(2))
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub m: u32,
    #[serde(serialize_with = "ser_rational")]
    pub energy: Rational,
    pub energy_f64: f64,
    pub mult: Option<i64>,
    /// `B + (m+1)S = 0`: multiplicity formula sits exactly on its boundary
    pub boundary: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    pub stop_reason: Option<String>,
}

fn energy(b: Rational, s: Rational, m: u32) -> Rational {
    let mr = Rational::from_integer(m as i128);
    b * (Rational::new(1, 2) + mr) + s * mr * (mr + 1) / 2
}

/// `λ_m = B(½ + m) + S m(m+1)/2` for every `m ≤ m_max` with `B + mS > 0`.
pub fn landau_spectrum(b: Rational, s: Rational, m_max: u32) -> SpectrumTable {
    let mut rows = Vec::new();
    let mut stop_reason = None;
    for m in 0..=m_max {
        if !(b + s * Rational::from_integer(m as i128)).is_positive() {
            stop_reason = Some(format!("B + mS <= 0 at m = {m}"));
            break;
        }
        let e = energy(b, s, m);
        rows.push(SpectrumRow {
            m,
            energy: e,
            energy_f64: e.to_f64().unwrap_or(f64::NAN),
            mult: None,
            boundary: false,
        });
    }
    SpectrumTable { rows, stop_reason }
}

/// `mult(λ_m) = d + (½ + m)χ`, valid when `B + (m+1)S > 0`.
pub fn landau_multiplicity(geom: &SurfaceGeometry, m: u32) -> Result<i64> {
    let test = geom.b + geom.s * Rational::from_integer(m as i128 + 1);
    if !test.is_positive() {
        return Err(Error::OutsideLandauRegime(format!(
            "B + (m+1)S = {test} <= 0 at m = {m}"
        )));
    }
    let chi = geom.euler_characteristic();
    // χ is even, so (½ + m)χ is an integer
    let mult = geom.degree + chi / 2 + m as i64 * chi;
    if mult <= 0 {
        return Err(Error::OutsideLandauRegime(format!("non-positive multiplicity {mult}")));
    }
    Ok(mult)
}

/// Closed-form energies together with multiplicities where they are valid.
pub fn spectrum_table(geom: &SurfaceGeometry, m_max: u32) -> SpectrumTable {
    let mut t = landau_spectrum(geom.b, geom.s, m_max);
    for row in &mut t.rows {
        row.mult = landau_multiplicity(geom, row.m).ok();
        row.boundary = (geom.b + geom.s * Rational::from_integer(row.m as i128 + 1)).is_zero();
    }
    t
}

/// Spectrum by the bosonic induction: at each step the kernel of `∂̄` on a
/// bundle of degree `δ` has dimension `δ + χ/2` when `δ > −χ`, and the rest
/// of the spectrum is the spectrum one step up, shifted by `B' + S`, for the
/// bundle `L ⊗ K⁻¹` of degree `δ + χ` and field `B' + S`.
pub fn weitzenbock_iterate(geom: &SurfaceGeometry, m_max: u32) -> SpectrumTable {
    let chi = geom.euler_characteristic();
    let mut deg = geom.degree;
    let mut field = geom.b;
    // Δ = ∂̄*∂̄ + B/2
    let mut level_energy = geom.b / 2;
    let mut rows = Vec::new();
    let mut stop_reason = None;
    for m in 0..=m_max {
        let row = |mult, boundary| SpectrumRow {
            m,
            energy: level_energy,
            energy_f64: level_energy.to_f64().unwrap_or(f64::NAN),
            mult,
            boundary,
        };
        if deg > -chi {
            rows.push(row(Some(deg + chi / 2), deg + chi == 0));
        } else if deg > 0 {
            // the kernel is non-trivial but its dimension is not fixed by Riemann-Roch
            rows.push(row(None, false));
        } else if deg == 0 && geom.canonical_power == Some(m) {
            // L ⊗ K^{-m} is trivial: the kernel is the constants
            rows.push(row(Some(1), true));
            stop_reason = Some(format!("degree 0 reached at m = {m} (trivial bundle)"));
            break;
        } else {
            stop_reason = Some(format!("degree {deg} leaves the Riemann-Roch regime at m = {m}"));
            break;
        }
        level_energy += field + geom.s;
        field += geom.s;
        deg += chi;
    }
    SpectrumTable { rows, stop_reason }
}

/// Number of `m ≥ 0` with `B + mS > 0` when `S < 0`: `⌈B/|S|⌉`.
pub fn hyperbolic_row_count(b: Rational, s: Rational) -> Option<u64> {
    if !s.is_negative() {
        return None;
    }
    let q = b / -s;
    Some(q.ceil().to_integer() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereCheck {
    /// `(d, m, d + (½+m)χ, 2(d/2 + m) + 1)`
    pub rows: Vec<(u32, u32, i64, i64)>,
    pub pass: bool,
}

/// Multiplicity on the round sphere against the monopole-harmonic count
/// `2(q + m) + 1` with charge `q = d/2`, for all `d ≤ d_max`, `m ≤ m_max`.
pub fn sphere_crosscheck(d_max: u32, m_max: u32) -> Result<SphereCheck> {
    let mut rows = Vec::new();
    let mut pass = true;
    for d in 1..=d_max {
        let geom = SurfaceGeometry::sphere(d)?;
        for m in 0..=m_max {
            let rr = landau_multiplicity(&geom, m)?;
            let q = Rational::new(d as i128, 2);
            let harmonic = (Rational::from_integer(2) * (q + Rational::from_integer(m as i128)) + 1).to_integer() as i64;
            pass &= rr == harmonic;
            rows.push((d, m, rr, harmonic));
        }
    }
    Ok(SphereCheck { rows, pass })
}

/// Rows on which both tables claim validity must agree exactly.
pub fn tables_agree(closed: &SpectrumTable, induced: &SpectrumTable) -> bool {
    closed.rows.iter().all(|c| match induced.rows.iter().find(|r| r.m == c.m) {
        Some(r) => r.energy == c.energy && (c.mult.is_none() || r.mult == c.mult),
        None => false,
    })
}

/// Geometry with prescribed degree and area, so that `B = d/a`.
pub fn geometry_from_degree(genus: u32, degree: i64, area_over_2pi: Rational) -> Result<SurfaceGeometry> {
    if degree <= 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let b = Rational::from_integer(degree as i128) / area_over_2pi;
    SurfaceGeometry::new(genus, b, area_over_2pi)
}

/// `count` geometries with genus below 5, degree in `1..40` and area `p/q`,
/// drawn deterministically from `seed`.
pub fn random_geometries(seed: u64, count: usize) -> Result<Vec<SurfaceGeometry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let genus = rng.gen_range(0..5);
            let degree = rng.gen_range(1..40);
            let area = Rational::new(rng.gen_range(1..12), rng.gen_range(1..6));
            geometry_from_degree(genus, degree, area)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn torus_energies() {
        let t = landau_spectrum(r(3, 1), r(0, 1), 5);
        assert_eq!(t.rows.len(), 6);
        for row in &t.rows {
            assert_eq!(row.energy, r(3, 1) * (r(1, 2) + r(row.m as i128, 1)));
        }
    }

    #[test]
    fn unit_sphere_degree_four() {
        let g = SurfaceGeometry::sphere(4).unwrap();
        assert_eq!(g.degree, 4);
        let t = spectrum_table(&g, 2);
        let e: Vec<Rational> = t.rows.iter().map(|x| x.energy).collect();
        assert_eq!(e, vec![r(1, 1), r(4, 1), r(8, 1)]);
        assert_eq!(t.rows[0].mult, Some(5));
        assert_eq!(t.rows[1].mult, Some(7));
    }

    #[test]
    fn genus_two() {
        let g = SurfaceGeometry::new(2, r(5, 1), r(2, 1)).unwrap();
        assert_eq!(g.s, r(-1, 1));
        assert_eq!(g.degree, 10);
        let t = landau_spectrum(g.b, g.s, 10);
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.rows[1].energy, r(13, 2));
        assert_eq!(landau_multiplicity(&g, 1).unwrap(), 7);
        assert!(matches!(landau_multiplicity(&g, 4), Err(Error::OutsideLandauRegime(_))));
    }

    #[test]
    fn rejects_fractional_degree() {
        assert!(SurfaceGeometry::new(0, r(1, 3), r(2, 1)).is_err());
    }

    #[test]
    fn torus_iteration_never_stops() {
        let g = SurfaceGeometry::new(1, r(2, 1), r(3, 2)).unwrap();
        let t = weitzenbock_iterate(&g, 40);
        assert_eq!(t.rows.len(), 41);
        assert!(t.stop_reason.is_none());
        assert!(t.rows.iter().all(|x| x.mult == Some(3)));
    }

    #[test]
    fn canonical_power_gives_r_plus_one_levels() {
        for (genus, rr) in [(2, 1), (2, 3), (3, 2), (4, 5)] {
            let g = SurfaceGeometry::canonical_power(genus, rr).unwrap();
            let t = weitzenbock_iterate(&g, 50);
            assert_eq!(t.rows.len(), rr as usize + 1, "genus {genus} r {rr}");
            assert!(t.stop_reason.is_some());
            // λ_r = r(½ + r) − r(r+1)/2 = r²/2
            assert_eq!(t.rows.last().unwrap().energy, r((rr * rr) as i128, 2));
        }
    }

    #[test]
    fn sphere_counts() {
        let c = sphere_crosscheck(20, 5).unwrap();
        assert!(c.pass);
        assert!(c.rows.contains(&(4, 0, 5, 5)));
        assert!(c.rows.contains(&(20, 5, 31, 31)));
    }

    #[test]
    fn hyperbolic_rows_match_scan() {
        for (b, s) in [(r(5, 1), r(-1, 1)), (r(9, 2), r(-1, 1)), (r(7, 3), r(-2, 3))] {
            let scan = landau_spectrum(b, s, 1000).rows.len() as u64;
            assert_eq!(hyperbolic_row_count(b, s), Some(scan));
        }
    }

    proptest! {
        #[test]
        fn induction_matches_closed_form(genus in 0u32..5, deg in 1i64..40, num in 1i128..12, den in 1i128..6) {
            let a = r(num, den);
            let g = geometry_from_degree(genus, deg, a).unwrap();
            let closed = spectrum_table(&g, 12);
            let induced = weitzenbock_iterate(&g, 12);
            prop_assert!(tables_agree(&closed, &induced));
        }

        #[test]
        fn energies_increase(b_num in 1i128..30, s_num in -5i128..6) {
            let t = landau_spectrum(r(b_num, 2), r(s_num, 3), 30);
            prop_assert!(t.rows.windows(2).all(|w| w[0].energy < w[1].energy));
        }
    }
}
