//! End-to-end tests of the `xorgames` binary: artifact shapes, exit
//! codes, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xorgames"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed with {:?}\nstderr: {}",
        args,
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("artifact exists");
    serde_json::from_str(&text).expect("artifact parses")
}

#[test]
fn gen_writes_normalized_cost_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    let doc = read_json(&game);
    assert_eq!(doc["m"], 2);
    assert_eq!(doc["n"], 2);
    let total: f64 = doc["cost"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap())
        .map(|x| x.as_f64().unwrap().abs())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn solve_reports_certified_chsh_value() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let sol = dir.path().join("sol.json");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "solve",
        "-i",
        game.to_str().unwrap(),
        "-o",
        sol.to_str().unwrap(),
    ]);
    let doc = read_json(&sol);
    let primal = doc["primal"].as_f64().unwrap();
    assert!((primal - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    assert_eq!(doc["certified"], true);
    assert_eq!(doc["N"].as_u64().unwrap(), 2);
    assert_eq!(doc["u"].as_array().unwrap().len(), 2);
}

#[test]
fn algebra_tight3_certificate_shape() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let cert = dir.path().join("cert.json");
    run_ok(&["gen", "tight", "--n", "3", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "algebra",
        "-i",
        game.to_str().unwrap(),
        "-o",
        cert.to_str().unwrap(),
    ]);
    let doc = read_json(&cert);
    assert_eq!(doc["strongly_clifford"], true);
    assert_eq!(doc["rank"], 2);
    assert_eq!(doc["min_dim"], 2);
    assert_eq!(doc["ebits"], 1);
}

#[test]
fn algebra_accepts_precomputed_solution() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let sol = dir.path().join("sol.json");
    let c1 = dir.path().join("cert1.json");
    let c2 = dir.path().join("cert2.json");
    run_ok(&["gen", "chsh", "--n", "3", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "solve",
        "-i",
        game.to_str().unwrap(),
        "-o",
        sol.to_str().unwrap(),
    ]);
    run_ok(&[
        "algebra",
        "-i",
        game.to_str().unwrap(),
        "-o",
        c1.to_str().unwrap(),
    ]);
    run_ok(&[
        "algebra",
        "-i",
        game.to_str().unwrap(),
        "--solution",
        sol.to_str().unwrap(),
        "-o",
        c2.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read(&c1).unwrap(),
        std::fs::read(&c2).unwrap(),
        "certificate must not depend on how the solution was supplied"
    );
}

#[test]
fn synth_emits_full_strategy_document() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let strat = dir.path().join("strat.json");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "synth",
        "-i",
        game.to_str().unwrap(),
        "-o",
        strat.to_str().unwrap(),
    ]);
    let doc = read_json(&strat);
    assert_eq!(doc["d1"], 2);
    assert_eq!(doc["d2"], 2);
    assert_eq!(doc["entropy"].as_f64().unwrap(), 1.0);
    assert!((doc["bias"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    // psi is flat interleaved over d1·d2 amplitudes.
    assert_eq!(doc["psi"].as_array().unwrap().len(), 8);
    // Observables are [re, im] entries.
    assert_eq!(doc["a"][0][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn verify_approx_all_rows_ok() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let csv = dir.path().join("verify.csv");
    run_ok(&["gen", "chsh", "--n", "3", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "verify-approx",
        "-i",
        game.to_str().unwrap(),
        "-o",
        csv.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "item,value,bound,ok");
    let mut rows = 0;
    for line in lines {
        assert!(line.ends_with(",true"), "violated row: {line}");
        rows += 1;
    }
    assert!(rows >= 5);
}

#[test]
fn sweep_emits_fixed_columns_and_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let csv = dir.path().join("sweep.csv");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "sweep",
        "-i",
        game.to_str().unwrap(),
        "-o",
        csv.to_str().unwrap(),
        "--eps-grid",
        "1e-3,0.3",
        "--seeds",
        "4",
        "--iters",
        "200",
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,measured_min_dim,bound_dim,seesaw_value_at_min_dim,certified_eps_q,seeds,iters"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    // Tight deficit needs the full quantum dimension, loose one is classical.
    assert_eq!(rows[0][1], "2");
    assert_eq!(rows[1][1], "1");
    assert_eq!(rows[0][5], "4");
    assert_eq!(rows[0][6], "200");
}

#[test]
fn report_bundles_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let report = dir.path().join("report.json");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    run_ok(&[
        "report",
        "-i",
        game.to_str().unwrap(),
        "-o",
        report.to_str().unwrap(),
        "--eps-grid",
        "0.3",
        "--seeds",
        "2",
        "--iters",
        "100",
    ]);
    let doc = read_json(&report);
    assert_eq!(doc["game"]["m"], 2);
    assert_eq!(doc["solution"]["certified"], true);
    assert_eq!(doc["certificate"]["min_dim"], 2);
    assert_eq!(doc["strategy"]["d1"], 2);
    assert!(doc["checks"].as_array().unwrap().len() >= 5);
    assert_eq!(doc["sweep"].as_array().unwrap().len(), 1);
}

#[test]
fn graph_gen_matches_explicit_edges() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = dir.path().join("g1.json");
    let g2 = dir.path().join("g2.json");
    run_ok(&["gen", "chsh", "--n", "3", "-o", g1.to_str().unwrap()]);
    run_ok(&[
        "gen",
        "graph",
        "--vertices",
        "3",
        "--edges",
        "1-2,1-3,2-3",
        "-o",
        g2.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&g1).unwrap(), std::fs::read(&g2).unwrap());
}

#[test]
fn identical_configs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let s1 = dir.path().join("s1.json");
    let s2 = dir.path().join("s2.json");
    run_ok(&["gen", "tight", "--n", "4", "-o", game.to_str().unwrap()]);
    for out in [&s1, &s2] {
        run_ok(&[
            "solve",
            "-i",
            game.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
            "--seed",
            "7",
        ]);
    }
    assert_eq!(std::fs::read(&s1).unwrap(), std::fs::read(&s2).unwrap());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"m\": bogus").unwrap();
    let out = run(&["solve", "-i", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["solve", "-i", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["gen", "chsh", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unconverged_solve_exits_3_but_writes_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let sol = dir.path().join("sol.json");
    run_ok(&["gen", "chsh", "--n", "2", "-o", game.to_str().unwrap()]);
    // Rank-1 embeddings cannot reach the quantum optimum, so the duality
    // gap stays macroscopic and certification fails.
    let out = run(&[
        "solve",
        "-i",
        game.to_str().unwrap(),
        "-o",
        sol.to_str().unwrap(),
        "--rank",
        "1",
        "--restarts",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc = read_json(&sol);
    assert_eq!(doc["certified"], false);
}

#[test]
fn sweep_without_clifford_structure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    // The 3-path graph game is not strongly Clifford.
    run_ok(&[
        "gen",
        "graph",
        "--vertices",
        "3",
        "--edges",
        "1-2,2-3",
        "-o",
        game.to_str().unwrap(),
    ]);
    let out = run(&[
        "sweep",
        "-i",
        game.to_str().unwrap(),
        "--eps-grid",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stdout_output_when_no_path_given() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    run_ok(&["gen", "cl", "--n", "2", "-o", game.to_str().unwrap()]);
    let out = run_ok(&["solve", "-i", game.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["certified"], true);
}
