use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bottleneck_cli::read_path_file;
use bottleneck_core::planner::vertices_cost;
use bottleneck_core::ScenarioConfig;

fn btt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn export(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let out = btt(&["export", name, "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path
}

fn flat(dir: &Path, value: f64) -> PathBuf {
    let path = dir.join("flat.json");
    fs::write(
        &path,
        format!(r#"{{"kind": "analytic", "d": 2, "analytic": {{"form": "constant", "value": {value}}}}}"#),
    )
    .unwrap();
    path
}

/// Header plus one row, split into columns.
fn row(out: &Output) -> Vec<String> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("scenario,n,seed,eta,h,solved,cost,"));
    lines.next().unwrap().split(',').map(String::from).collect()
}

#[test]
fn run_p1_writes_verifiable_path() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p1");
    let path_file = dir.path().join("path.txt");
    let out = btt(&[
        "run",
        "--scenario",
        scenario.to_str().unwrap(),
        "--n",
        "8000",
        "--seed",
        "5",
        "--out",
        path_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let fields = row(&out);
    assert_eq!(fields[0], "p1");
    assert_eq!(fields[5], "true");
    let cost: f64 = fields[6].parse().unwrap();
    assert!(cost < 0.64, "cost {cost}");

    let vertices = read_path_file(&path_file).unwrap();
    assert_eq!(vertices.first().unwrap(), &vec![0.0, 0.0]);
    assert_eq!(vertices.last().unwrap(), &vec![1.0, 1.0]);
    let cfg = ScenarioConfig::load(&fs::read_to_string(&scenario).unwrap()).unwrap();
    let map = cfg.cost_map().unwrap();
    assert_eq!(
        vertices_cost(map.as_ref(), &vertices, 0.01)
            .unwrap()
            .value(),
        cost
    );
}

#[test]
fn run_constant_map() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = flat(dir.path(), 0.125);
    let out = btt(&[
        "run",
        "--scenario",
        scenario.to_str().unwrap(),
        "--n",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(row(&out)[6], "0.125");
}

#[test]
fn enclosed_leader_is_unsolved() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p2-enclosed");
    let path_file = dir.path().join("path.txt");
    let out = btt(&[
        "run",
        "--scenario",
        scenario.to_str().unwrap(),
        "--n",
        "2000",
        "--out",
        path_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let fields = row(&out);
    assert_eq!((fields[5].as_str(), fields[6].as_str()), ("false", "none"));
    assert!(!path_file.exists());
}

#[test]
fn errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(
        btt(&["run", "--scenario", missing.to_str().unwrap(), "--n", "10"])
            .status
            .code(),
        Some(2)
    );

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"kind": "frechet", "d": 3, "curves": [[[0,0],[1,0]], [[0,1],[1,1]]]}"#,
    )
    .unwrap();
    let out = btt(&["run", "--scenario", bad.to_str().unwrap(), "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // usage errors from argument parsing
    assert_eq!(btt(&["run", "--n", "10"]).status.code(), Some(2));
    assert_eq!(
        btt(&["sweep", "--scenario", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_arity_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p1");
    let sweep = |name: &str| {
        let out_file = dir.path().join(name);
        let out = btt(&[
            "sweep",
            "--scenario",
            scenario.to_str().unwrap(),
            "--n-list",
            "8000,16000",
            "--reps",
            "2",
            "--seed",
            "3",
            "--no-timing",
            "--out",
            out_file.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        fs::read(out_file).unwrap()
    };
    let a = sweep("a.csv");
    assert_eq!(a, sweep("b.csv"));

    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 4 + 2);
    let seeds: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(seeds, ["3", "4", "mean", "3", "4", "mean"]);
    let cost_of = |l: &str| l.split(',').nth(6).unwrap().parse::<f64>().unwrap();
    let expected_mean = (cost_of(lines[1]) + cost_of(lines[2])) / 2.0;
    assert_eq!(cost_of(lines[3]), expected_mean);
}

#[test]
fn explicit_oracle_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p1");
    let s = scenario.to_str().unwrap();
    for seed in ["0", "9"] {
        let run = btt(&["run", "--scenario", s, "--n", "150", "--seed", seed]);
        let oracle = btt(&[
            "oracle",
            "--scenario",
            s,
            "--mode",
            "explicit",
            "--n",
            "150",
            "--seed",
            seed,
        ]);
        assert_eq!(run.status.code(), oracle.status.code());
        assert_eq!(row(&run)[6], row(&oracle)[6]);
    }
}

#[test]
fn explicit_oracle_with_radius_override() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = flat(dir.path(), 0.3);
    let out = btt(&[
        "oracle",
        "--scenario",
        scenario.to_str().unwrap(),
        "--mode",
        "explicit",
        "--n",
        "0",
        "--radius",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(row(&out)[6], "0.3");
}

#[test]
fn grid_oracle_on_p1() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p1");
    let out = btt(&[
        "oracle",
        "--scenario",
        scenario.to_str().unwrap(),
        "--mode",
        "grid",
        "--k",
        "801",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = row(&out)[6].parse().unwrap();
    assert!((v - 0.34).abs() <= 0.02, "grid value {v}");
}

#[test]
fn grid_oracle_rejects_non_frechet() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = export(dir.path(), "p2");
    let out = btt(&[
        "oracle",
        "--scenario",
        scenario.to_str().unwrap(),
        "--mode",
        "grid",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
