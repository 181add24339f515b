//! Runs one experiment and collects its guards, data and tables.

use landau_core::bargmann::star_order_report;
use landau_core::exact::Rational;
use landau_core::fock::{fock_basis, ladder_matrices, pi_m};
use landau_core::identities::{exact_suite, SuiteConfig};
use landau_core::riemann_roch::{composition_sum, demailly_leading, dim_surface, dim_torus};
use landau_core::slope::{fit_slope, SlopeFit};
use landau_core::surface::{
    geometry_from_degree, landau_multiplicity, random_geometries, sphere_crosscheck, spectrum_table, tables_agree,
    weitzenbock_iterate,
};
use landau_core::torus::defects::defects_at;
use landau_core::torus::kernel::kernel_compare;
use landau_core::torus::ladder::ladder_map;
use landau_core::torus::peaked::peaked_gram;
use landau_core::torus::{DiscreteBundle, TorusGeometry, TorusModel};
use serde_json::json;
use thiserror::Error;

use crate::config::{DimConfig, DimTarget, Experiment, ExperimentConfig, FockConfig, MatrixKind, SurfaceConfig, TorusConfig};
use crate::report::{Guard, Report, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Core(#[from] landau_core::Error),
}

impl RunError {
    /// 2 for configuration errors, 1 for everything found while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(_) => 1,
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    let mut report = Report::new(cfg);
    match &cfg.experiment {
        Experiment::Fock(c) => run_fock(c, &mut report)?,
        Experiment::Surface(c) => run_surface(c, cfg.seed, &mut report)?,
        Experiment::Dim(c) => run_dim(c, &mut report)?,
        Experiment::Torus(c) => run_torus(c, cfg.seed, &mut report)?,
    }
    Ok(report)
}

fn run_fock(c: &FockConfig, report: &mut Report) -> Result<(), RunError> {
    if c.check_identities {
        let suite = SuiteConfig { n_max: c.n, degree_cap: c.degree, ..SuiteConfig::default() };
        let checks = exact_suite(&suite)?;
        let mut table = Table::new("identities", &["identity", "n", "degree_cap", "cases", "failures", "residual", "pass"]);
        for chk in &checks {
            report.guard(Guard::new(
                format!("{} (n={})", chk.name, chk.n),
                chk.pass(),
                format!("{} cases, {} failures, residual {}", chk.cases, chk.failures, chk.residual),
            ));
            table.push(vec![
                chk.name.clone(),
                chk.n.to_string(),
                chk.degree_cap.to_string(),
                chk.cases.to_string(),
                chk.failures.to_string(),
                chk.residual.to_string(),
                chk.pass().to_string(),
            ]);
        }
        report.set("identities", &checks);
        report.tables.push(table);
        let star = star_order_report(c.n, c.degree.min(3) as u32);
        report.set("star_order", json!({ "report": star, "matching": star.matching() }));
    }
    if let Some(kind) = c.dump {
        let basis = fock_basis(c.n, c.degree as i64)?;
        let op = match kind {
            MatrixKind::Projector { m } => pi_m(&basis, m)?,
            MatrixKind::Lower { i } => ladder_matrices(&basis, i)?.0,
            MatrixKind::Raise { i } => ladder_matrices(&basis, i)?.1,
        };
        report.set("dump", op.dump());
    }
    Ok(())
}

fn run_surface(c: &SurfaceConfig, seed: u64, report: &mut Report) -> Result<(), RunError> {
    let geom = c.geometry()?;
    let m_max = c.levels - 1;
    let closed = spectrum_table(&geom, m_max);
    let induced = weitzenbock_iterate(&geom, m_max);
    let mut table = Table::new("spectrum", &["m", "energy", "energy_f64", "mult", "valid", "boundary"]);
    for row in &closed.rows {
        table.push(vec![
            row.m.to_string(),
            row.energy.to_string(),
            row.energy_f64.to_string(),
            row.mult.map(|v| v.to_string()).unwrap_or_default(),
            row.mult.is_some().to_string(),
            row.boundary.to_string(),
        ]);
    }
    report.tables.push(table);
    report.guard(Guard::new(
        "induction matches closed form",
        tables_agree(&closed, &induced),
        format!("{} closed-form rows, {} induced rows", closed.rows.len(), induced.rows.len()),
    ));
    report.set("geometry", &geom);
    report.set("closed_form", &closed);
    report.set("induction", &induced);

    if c.random > 0 {
        let mut table = Table::new("random", &["genus", "b", "area_over_2pi", "degree", "rows", "agree"]);
        let mut agree = 0;
        for g in random_geometries(seed, c.random)? {
            let closed = spectrum_table(&g, 12);
            let ok = tables_agree(&closed, &weitzenbock_iterate(&g, 12));
            agree += ok as usize;
            table.push(vec![
                g.genus.to_string(),
                g.b.to_string(),
                g.area_over_2pi.to_string(),
                g.degree.to_string(),
                closed.rows.len().to_string(),
                ok.to_string(),
            ]);
        }
        report.guard(Guard::new(
            "random geometries",
            agree == c.random,
            format!("{agree}/{} tables agree exactly", c.random),
        ));
        report.tables.push(table);
    }
    if c.sphere_check {
        let chk = sphere_crosscheck(20, 5)?;
        report.guard(Guard::new(
            "sphere multiplicities",
            chk.pass,
            format!("{} (d, m) pairs against 2(d/2 + m) + 1", chk.rows.len()),
        ));
        report.set("sphere_check", &chk);
    }
    Ok(())
}

fn run_dim(c: &DimConfig, report: &mut Report) -> Result<(), RunError> {
    let mut table = Table::new("count", &["geometry", "k", "m", "dim", "leading", "regime", "threshold_k"]);
    match &c.target {
        DimTarget::Surface { genus, d } => {
            let rep = dim_surface(c.k, *d, *genus, c.m);
            // area A/2π = d puts the field at B = k
            let geom = geometry_from_degree(*genus, (c.k * d) as i64, Rational::from_integer(*d as i128))?;
            match landau_multiplicity(&geom, c.m) {
                Ok(mult) => report.guard(Guard::new(
                    "Riemann-Roch equals surface multiplicity",
                    mult == rep.dim,
                    format!("dim {} vs multiplicity {mult} at B = k", rep.dim),
                )),
                Err(e) => report.set("multiplicity", e.to_string()),
            }
            table.push(vec![
                rep.geometry.clone(),
                rep.k.to_string(),
                rep.m.to_string(),
                rep.dim.to_string(),
                rep.leading.to_string(),
                json!(rep.regime).as_str().unwrap_or_default().to_string(),
                rep.threshold_k.to_string(),
            ]);
            report.set("dim", &rep);
        }
        DimTarget::Torus { d_list } => {
            let n = d_list.len();
            let dim = dim_torus(n, c.k, d_list, c.m)?;
            let sum = composition_sum(c.k, d_list, c.m);
            let vol: f64 = d_list.iter().map(|&d| 2.0 * std::f64::consts::PI * d as f64).product();
            let leading = demailly_leading(n, c.m, vol, c.k)?;
            report.guard(Guard::new(
                "rank formula equals composition sum",
                dim == sum,
                format!("{dim} vs {sum}"),
            ));
            report.guard(Guard::new(
                "flat leading term is exact",
                (leading - dim as f64).abs() <= 1e-9 * dim as f64,
                format!("leading {leading}"),
            ));
            let name = format!("torus d={d_list:?}");
            table.push(vec![
                name.clone(),
                c.k.to_string(),
                c.m.to_string(),
                dim.to_string(),
                leading.to_string(),
                "guaranteed".into(),
                "1".into(),
            ]);
            report.set("dim", json!({ "geometry": name, "k": c.k, "m": c.m, "dim": dim, "composition_sum": sum, "leading": leading }));
        }
    }
    report.tables.push(table);
    Ok(())
}

fn fit_guard(report: &mut Report, name: String, fit: &SlopeFit, pass: bool, rule: &str) {
    report.guard(Guard::new(
        name,
        pass,
        format!("slope {:.3} (R² {:.3}), required {rule}", fit.slope, fit.r_squared),
    ));
}

fn run_torus(c: &TorusConfig, seed: u64, report: &mut Report) -> Result<(), RunError> {
    let geom = TorusGeometry::new(c.d)?;
    let symbols = c.symbols()?;
    let solver = landau_core::torus::SolverOptions { seed, ..c.solver.clone() };
    let mut ks = c.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let fitted = ks.len() >= 4;
    let levels: Vec<usize> = (0..c.levels).collect();

    let mut eig = Table::new("eigenvalues", &["k", "grid", "index", "eigenvalue", "scaled", "level", "residual"]);
    let mut clus = Table::new(
        "clusters",
        &["k", "m", "start", "dim", "expected_dim", "center", "tolerance", "spread", "touches_boundary"],
    );
    let mut def = Table::new("defects", &["k", "m", "grid", "flux", "product", "commutator", "b1"]);
    let mut ker = Table::new(
        "kernel",
        &["k", "m", "diagonal_error", "diagonal_mean_error", "sup_error", "base_points", "compared"],
    );
    let mut lad = Table::new("ladder", &["k", "m", "scheme", "isometry_defect", "coisometry_defect", "max_angle"]);
    let mut pk = Table::new("peaked", &["k", "grid", "max_error"]);

    let (mut dims, mut residuals, mut clusters, mut defects, mut kernels, mut ladders, mut peaked) =
        (vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    let mut clusters_ok = true;
    let mut dims_ok = true;

    for &k in &ks {
        let n = c.grid.grid(geom, k);
        let bundle = if c.levels > 0 {
            let model = TorusModel::solve(geom, k, n, c.levels - 1, c.flux_limit, &solver)?;
            let spec = &model.spectrum;
            let h2 = spec.h * spec.h;
            residuals.push(json!({
                "k": k, "grid": n, "max_residual": spec.max_residual(),
                "iterations": spec.iterations, "dense": spec.dense,
            }));
            let scaled = spec.scaled();
            for (i, (&l, &s)) in spec.eigenvalues.iter().zip(&scaled).enumerate() {
                let level = model.clusters.iter().find(|cl| cl.range().contains(&i)).map(|cl| cl.m.to_string());
                eig.push(vec![
                    k.to_string(),
                    n.to_string(),
                    i.to_string(),
                    l.to_string(),
                    s.to_string(),
                    level.unwrap_or_default(),
                    spec.residuals[i].to_string(),
                ]);
            }
            let kd = (k * c.d) as usize;
            for cl in &model.clusters {
                let tol = (2.0 * k as f64 * h2 * (cl.m as f64 + 1.0)).max(1e-3);
                let ok = (cl.center - (cl.m as f64 + 0.5)).abs() <= tol;
                clusters_ok &= ok && cl.dim == kd;
                let rr = dim_surface(k as u64, c.d as u64, 1, cl.m as u32).dim;
                let b_eq_k = geometry_from_degree(1, kd as i64, Rational::from_integer(c.d as i128))?;
                let mult = landau_multiplicity(&b_eq_k, cl.m as u32)?;
                dims_ok &= cl.dim as i64 == rr && rr == mult;
                dims.push(json!({ "k": k, "m": cl.m, "numerical": cl.dim, "riemann_roch": rr, "multiplicity": mult }));
                clus.push(vec![
                    k.to_string(),
                    cl.m.to_string(),
                    cl.start.to_string(),
                    cl.dim.to_string(),
                    kd.to_string(),
                    cl.center.to_string(),
                    tol.to_string(),
                    cl.spread.to_string(),
                    cl.touches_boundary.to_string(),
                ]);
                clusters.push(json!({ "k": k, "grid": n, "cluster": cl, "tolerance": tol }));
            }
            if let Some((f, g)) = &symbols {
                for &m in &levels {
                    let r = defects_at(&model, f, g, m)?;
                    def.push(vec![
                        k.to_string(),
                        m.to_string(),
                        r.grid.to_string(),
                        r.flux.to_string(),
                        r.product.to_string(),
                        r.commutator.to_string(),
                        r.b1.to_string(),
                    ]);
                    defects.push(r);
                }
            }
            if c.kernel_compare {
                for &m in &levels {
                    let r = kernel_compare(&model.projector(m)?, c.kernel_stride)?;
                    ker.push(vec![
                        k.to_string(),
                        m.to_string(),
                        r.diagonal_error.to_string(),
                        r.diagonal_mean_error.to_string(),
                        r.sup_error.to_string(),
                        r.base_points.to_string(),
                        r.compared.to_string(),
                    ]);
                    kernels.push(r);
                }
            }
            if let Some(m) = c.ladder {
                let r = ladder_map(&model.bundle, &model.projector(0)?, &model.projector(m)?, c.scheme)?;
                lad.push(vec![
                    k.to_string(),
                    m.to_string(),
                    json!(r.scheme).as_str().unwrap_or_default().to_string(),
                    r.isometry_defect.to_string(),
                    r.coisometry_defect.to_string(),
                    r.max_angle().to_string(),
                ]);
                ladders.push(r);
            }
            model.bundle
        } else {
            DiscreteBundle::with_limit(geom, k, n, c.flux_limit)?
        };
        if c.peaked {
            let mid = geom.side() / 2.0;
            let r = peaked_gram(&bundle, (mid, mid), &[0, 1, 2])?;
            pk.push(vec![k.to_string(), n.to_string(), r.max_error.to_string()]);
            peaked.push(r);
        }
    }

    let mut slopes = Vec::new();
    if c.levels > 0 {
        report.guard(Guard::new(
            "cluster centers and dimensions",
            clusters_ok,
            format!("levels 0..{} at k = {ks:?}; dim must equal k·d", c.levels),
        ));
        report.guard(Guard::new(
            "dimensions match Riemann-Roch",
            dims_ok,
            "numerical count = dim_surface = surface multiplicity at B = k",
        ));
    }
    if fitted {
        for &m in &levels {
            if symbols.is_some() {
                let at = |sel: fn(&landau_core::torus::defects::DefectRow) -> f64| -> Vec<(f64, f64)> {
                    defects.iter().filter(|r| r.m == m).map(|r| (r.k as f64, sel(r))).collect()
                };
                for (name, vals, expected, band) in [
                    ("product defect", at(|r| r.product), -2.0, 0.3),
                    ("commutator defect", at(|r| r.commutator), -1.0, 0.3),
                    ("B1 defect", at(|r| r.b1), -2.0, 0.4),
                ] {
                    let fit = fit_slope(&vals, expected, band)?;
                    fit_guard(report, format!("{name} slope m={m}"), &fit, fit.pass, &format!("{expected} ± {band}"));
                    slopes.push(json!({ "quantity": name, "m": m, "fit": fit }));
                }
            }
            if c.kernel_compare {
                let sel = |f: fn(&landau_core::torus::kernel::KernelReport) -> f64| -> Vec<(f64, f64)> {
                    kernels.iter().filter(|r| r.m == m).map(|r| (r.k as f64, f(r))).collect()
                };
                let diag = fit_slope(&sel(|r| r.diagonal_error), -1.0, 0.4)?;
                fit_guard(report, format!("kernel diagonal slope m={m}"), &diag, diag.pass, "-1 ± 0.4");
                let sup = fit_slope(&sel(|r| r.sup_error), 0.0, 0.2)?;
                fit_guard(report, format!("kernel sup-error slope m={m}"), &sup, sup.slope <= 0.2, "<= 0.2");
                slopes.push(json!({ "quantity": "kernel diagonal", "m": m, "fit": diag }));
                slopes.push(json!({ "quantity": "kernel sup", "m": m, "fit": sup }));
            }
        }
        if !ladders.is_empty() {
            let vals: Vec<(f64, f64)> = ladders.iter().map(|r| (r.k as f64, r.isometry_defect)).collect();
            let fit = fit_slope(&vals, -1.0, 0.4)?;
            fit_guard(report, "ladder isometry slope".into(), &fit, fit.pass, "-1 ± 0.4");
            slopes.push(json!({ "quantity": "ladder isometry", "m": c.ladder, "fit": fit }));
        }
        if !peaked.is_empty() {
            let vals: Vec<(f64, f64)> = peaked.iter().map(|r| (r.k as f64, r.max_error)).collect();
            let fit = fit_slope(&vals, -0.5, 0.3)?;
            fit_guard(report, "peaked Gram slope".into(), &fit, fit.slope <= -0.2, "<= -0.2");
            slopes.push(json!({ "quantity": "peaked gram", "m": null, "fit": fit }));
        }
    }
    if let Some(last) = ladders.last() {
        let angles: Vec<f64> = ladders.iter().map(|r| r.max_angle()).collect();
        let decreasing = angles.windows(2).all(|w| w[1] < w[0]);
        report.guard(Guard::new(
            "ladder angle",
            last.max_angle() <= 0.1 && decreasing,
            format!("max angle {:.3e} at k = {}, decreasing in k: {decreasing}", last.max_angle(), last.k),
        ));
    }

    report.set("clusters", &clusters);
    report.set("dims", &dims);
    report.set("residuals", &residuals);
    report.set("defects", &defects);
    report.set("kernels", &kernels);
    report.set("ladders", &ladders);
    report.set("peaked", &peaked);
    report.set("slopes", &slopes);
    for t in [eig, clus, def, ker, lad, pk] {
        if !t.rows.is_empty() {
            report.tables.push(t);
        }
    }
    Ok(())
}
