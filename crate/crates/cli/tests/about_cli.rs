//! Runs before the acceptance target (test binaries run in name order), so
//! an acceptance failure never hides these results.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use landau_lab::args::Cli;
use landau_lab::config::{Experiment, TorusConfig};
use landau_lab::{emit_report, run_experiment, ExperimentConfig, Format, Report};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_landau-lab"))
}

fn config(args: &[&str]) -> ExperimentConfig {
    let mut argv = vec!["landau-lab"];
    argv.extend_from_slice(args);
    Cli::try_parse_from(argv).unwrap().to_config().unwrap()
}

fn small_torus() -> ExperimentConfig {
    config(&[
        "torus", "--d", "1", "--k", "2,3", "--grid", "24", "--flux-limit", "0.3", "--levels", "2",
        "--defects", "f=cosx", "g=siny", "--kernel-compare", "--ladder", "m=1", "--peaked",
    ])
}

#[test]
fn config_round_trips_through_json() {
    for cfg in [
        config(&["fock", "--check-identities", "--n", "1", "--dump", "adag:1"]),
        config(&["surface", "--genus", "2", "--B", "9/2", "--random", "3"]),
        config(&["dim", "--surface", "g=2,d=10", "--k", "1", "--m", "1"]),
        config(&["dim", "--torus", "1,2", "--k", "3"]),
        small_torus(),
    ] {
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}

proptest! {
    #[test]
    fn torus_config_round_trip(seed in any::<u64>(), ks in prop::collection::vec(1u32..40, 0..6), levels in 0usize..5, per_k in 1.0f64..20.0) {
        let mut cfg = small_torus();
        cfg.seed = seed;
        if let Experiment::Torus(t) = &mut cfg.experiment {
            t.k_list = ks;
            t.levels = levels;
            t.grid = landau_core::torus::GridPolicy::Proportional { per_k };
        }
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn empty_k_list_is_a_config_error() {
    let mut cfg = small_torus();
    if let Experiment::Torus(TorusConfig { k_list, .. }) = &mut cfg.experiment {
        k_list.clear();
    }
    let err = run_experiment(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("torus.k_list"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = bin().arg("--config").arg(&path).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("torus.k_list"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| bin().arg("--out").arg(dir.path()).args(args).output().unwrap().status.code();
    assert_eq!(run(&["fock", "--check-identities", "--n", "1", "--degree", "4"]), Some(0));
    assert_eq!(run(&["fock", "--n", "3"]), Some(2));
    assert_eq!(run(&["torus", "--no-such-flag"]), Some(2));
    assert_eq!(run(&["torus", "--k", "0"]), Some(2));
    assert_eq!(run(&["dim"]), Some(2));
    // the grid guard refuses k h² = 0.39
    assert_eq!(run(&["torus", "--k", "4", "--grid", "8", "--levels", "1"]), Some(1));
    // at d = 1 the cut-off radius is too small for the peaked sections to converge
    assert_eq!(run(&["torus", "--d", "1", "--levels", "0", "--peaked"]), Some(1));
}

#[test]
fn empty_report_is_a_valid_document() {
    let report = Report::new(&small_torus());
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&report, &[Format::Json, Format::Csv], dir.path()).unwrap();
    assert_eq!(files.len(), 1);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(v["guards"], serde_json::json!([]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
}

fn headers(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "csv") {
            let text = std::fs::read_to_string(&p).unwrap();
            out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), text.lines().next().unwrap().to_string());
        }
    }
    out
}

#[test]
fn csv_headers_match_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in [
        config(&["fock", "--check-identities", "--n", "1", "--degree", "3"]),
        config(&["surface", "--genus", "2", "--B", "5", "--random", "2"]),
        config(&["dim", "--torus", "1,1", "--k", "3", "--m", "1"]),
        small_torus(),
    ] {
        let report = run_experiment(&cfg).unwrap();
        emit_report(&report, &[Format::Csv], dir.path()).unwrap();
    }
    let golden: BTreeMap<String, String> = include_str!("golden/csv_headers.txt")
        .lines()
        .map(|l| {
            let (f, h) = l.split_once(": ").unwrap();
            (f.to_string(), h.to_string())
        })
        .collect();
    assert_eq!(headers(dir.path()), golden);
}

#[test]
fn reports_are_deterministic_and_parse_back() {
    let cfg = small_torus();
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let back: Report = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back.config, cfg);
    assert_eq!(back.guards, a.guards);
    assert!(a.data["defects"].as_array().unwrap().len() == 4);
}

#[test]
fn surface_examples_through_the_cli() {
    let r = run_experiment(&config(&["surface", "--genus", "0", "--B", "2", "--levels", "2"])).unwrap();
    let rows = &r.data["closed_form"]["rows"];
    assert_eq!(rows[0]["mult"], 5);
    assert_eq!(rows[1]["mult"], 7);
    let r = run_experiment(&config(&["surface", "--genus", "2", "--B", "5"])).unwrap();
    assert_eq!(r.data["closed_form"]["rows"][1]["energy"], "13/2");
    assert_eq!(r.data["closed_form"]["rows"][1]["mult"], 7);
    assert!(r.pass);
}
