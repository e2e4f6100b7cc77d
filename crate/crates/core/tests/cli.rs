use std::process::Command;

use raffleplex::cli::{run, RunReport};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_raffleplex"))
}

fn json_run(args: &[&str]) -> RunReport {
    let mut argv = vec!["raffleplex", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let parsed: RunReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(
        Some(parsed.without_timing()),
        out.report.map(|r| r.without_timing())
    );
    parsed
}

#[test]
fn elliptope_check_reports_boundary() {
    let r = json_run(&["elliptope", "check", "--tau", "-0.5", "-0.5", "-0.5"]);
    assert_eq!(r.results["classification"], "Boundary");
    assert_eq!(r.results["tetrahedron"]["classification"], "Outside");
    assert_eq!(r.results["mermin"], -1.5);
}

#[test]
fn tetra_and_game_subcommands() {
    let t = json_run(&["tetra", "facets"]);
    assert_eq!(t.results["facet_count"], 4);
    assert_eq!(t.results["mermin_min"], -1.0);
    assert_eq!(json_run(&["game", "classical"]).results["win"], 0.75);
    assert_eq!(json_run(&["game", "pr"]).results["chsh"], 4.0);
    let q = json_run(&["game", "quantum", "--grid", "12"]);
    assert!((q.results["chsh"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-6);
}

#[test]
fn raffle_and_quantum_subcommands() {
    let h = json_run(&["raffle", "hull", "--spin", "1"]);
    assert_eq!(h.results["contains_mermin_point"], true);
    let c = json_run(&[
        "raffle", "corr", "--spin", "1", "--ticket", "2,0,-2", "--ticket", "0,-2,2", "--ticket",
        "-2,2,0",
    ]);
    assert_eq!(c.results["admissible"], true);
    let q = json_run(&[
        "quantum", "corr", "--spin", "3/2", "--a", "0", "0", "1", "--b", "1", "0", "0",
    ]);
    assert!(q.results["tau"].as_f64().unwrap().abs() < 1e-12);
    let j = json_run(&[
        "quantum", "joint", "--spin", "1/2", "--a", "0", "0", "1", "--b", "0", "0", "1",
    ]);
    assert_eq!(j.results["distribution"]["p"]["1,1"], 0.0);
    assert!((j.results["product_expectation"].as_f64().unwrap() + 0.25).abs() < 1e-12);
}

#[test]
fn gap_profile_lists_each_spin() {
    let g = json_run(&["gap", "profile", "--spins", "1/2,1"]);
    assert_eq!(g.results["max_gaps"].as_array().unwrap().len(), 2);
    assert_eq!(g.results["non_increasing"], true);
}

#[test]
fn seeded_simulation_is_reproducible() {
    let args = [
        "game",
        "simulate",
        "--behavior",
        "classical",
        "--rounds",
        "20000",
        "--seed",
        "5",
        "--shards",
        "3",
    ];
    let a = json_run(&args);
    let b = json_run(&args);
    assert_eq!(
        serde_json::to_string(&a.without_timing()).unwrap(),
        serde_json::to_string(&b.without_timing()).unwrap()
    );
    assert_eq!(a.seed, Some(5));
}

#[test]
fn seed_comes_from_environment() {
    let out = bin()
        .args(["--json", "game", "simulate", "--rounds", "1000"])
        .env("RAFFLEPLEX_SEED", "77")
        .output()
        .unwrap();
    assert!(out.status.success());
    let r: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.seed, Some(77));
}

#[test]
fn exit_codes() {
    let usage = bin()
        .args(["elliptope", "check", "--tau", "0", "0", "0", "--bogus"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&usage.stderr).unwrap();
    assert_eq!(err["error"]["code"], "Usage");

    let domain = bin()
        .args(["elliptope", "check", "--tau", "2", "0", "0"])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&domain.stderr).unwrap();
    assert_eq!(err["error"]["code"], "Domain");

    let config = bin()
        .args(["elliptope", "mesh", "--resolution", "2"])
        .output()
        .unwrap();
    assert_eq!(config.status.code(), Some(1));

    let ok = bin().args(["tetra", "facets"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout)
        .unwrap()
        .contains("facet_count: 4"));
}

#[test]
fn output_collisions_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let csv = dir.path().join("blocks.csv");
    std::fs::write(&csv, "keep").unwrap();
    let out = run([
        "raffleplex",
        "--out",
        report.to_str().unwrap(),
        "game",
        "simulate",
        "--rounds",
        "1000",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
    assert!(!report.exists());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "keep");

    let out = run([
        "raffleplex",
        "--force",
        "--out",
        report.to_str().unwrap(),
        "game",
        "simulate",
        "--rounds",
        "1000",
        "--block",
        "250",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let saved: RunReport =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved.subcommand, "game simulate");
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("block,rounds,rate,cumulative\n"));
    assert_eq!(csv_text.lines().count(), 5);
}

#[test]
fn mesh_and_scene_export() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("ell.obj");
    let scene = dir.path().join("scene");
    let r = json_run(&[
        "elliptope",
        "mesh",
        "--resolution",
        "6",
        "--obj",
        obj.to_str().unwrap(),
        "--scene",
        scene.to_str().unwrap(),
        "--spins",
        "1/2,1",
    ]);
    assert_eq!(r.results["watertight"], true);
    assert_eq!(r.results["vertex_count"], 6 * 36 + 2);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("v ")).count(),
        6 * 36 + 2
    );
    for name in [
        "elliptope.obj",
        "tetrahedron.obj",
        "cube.obj",
        "raffle_spin_1_2.obj",
        "raffle_spin_1.obj",
        "plot_scene.py",
    ] {
        assert!(scene.join(name).exists(), "{name}");
    }
    let again = run([
        "raffleplex",
        "elliptope",
        "mesh",
        "--resolution",
        "6",
        "--scene",
        scene.to_str().unwrap(),
    ]);
    assert_eq!(again.code, 2);
}

#[test]
fn raffle_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("raffle.json");
    std::fs::write(
        &path,
        r#"{"twice_s": 1, "weights": [{"ticket": [1, 1, 1], "p": 0.5}, {"ticket": [-1, -1, -1], "p": 0.5}]}"#,
    )
    .unwrap();
    let r = json_run(&["raffle", "corr", "--file", path.to_str().unwrap()]);
    assert_eq!(r.results["tau"], serde_json::json!([1.0, 1.0, 1.0]));

    std::fs::write(
        &path,
        r#"{"twice_s": 1, "weights": [{"ticket": [1, 1, 1], "p": 1.0}]}"#,
    )
    .unwrap();
    let bad = run([
        "raffleplex",
        "raffle",
        "corr",
        "--file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("Admissibility"));
}
