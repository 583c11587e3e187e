use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sensor-relocation"));
    cmd.env_remove("SENSOR_RELOCATION_OUT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_runs_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&[
            "line-run",
            "--n",
            "4",
            "--k",
            "1",
            "--a",
            "1",
            "--trials",
            "1",
            "--seed",
            "7",
            "--out",
            path_arg(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let first = std::fs::read(a.join("line-sweep.csv")).unwrap();
    assert_eq!(first, std::fs::read(b.join("line-sweep.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("\"master_seed\":7"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args([
            "plane-run",
            "--n",
            "4,9,16",
            "--trials",
            "4",
            "--group-size",
            "2",
            "--format",
            "csv,json,svg",
        ])
        .env("SENSOR_RELOCATION_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for ext in ["csv", "json", "svg"] {
        assert!(dir.path().join(format!("plane-sweep.{ext}")).exists());
    }
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("plane-sweep.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["groups"].as_array().unwrap().len(), 6);
    assert!(json["fit"]["exponent"].is_number());
}

#[test]
fn figure_preset_writes_chart_with_hash() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "figure",
        "--figure",
        "fig3",
        "--n",
        "100,400",
        "--trials",
        "10",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("fig3.svg")).unwrap();
    assert!(svg.contains(r#"width="800" height="600""#));
    let hash_line = svg
        .lines()
        .find(|l| l.starts_with("<!-- config-hash: "))
        .unwrap();
    let csv = std::fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    let hash = hash_line
        .trim_start_matches("<!-- config-hash: ")
        .trim_end_matches(" -->");
    assert!(csv.contains(&format!("# config-hash: {hash}")));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "n = [9, 25]\ntrials = 6\ngroup-size = 3\nseed = 99\nk-rule = \"sqrt\"\n",
    )
    .unwrap();
    let o = run(&[
        "sweep",
        "--config",
        path_arg(&cfg),
        "--seed",
        "5",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("line-sweep.csv")).unwrap();
    assert!(csv.contains("\"master_seed\":5"));
    assert!(csv.contains("\"capacity_rule\":\"ceil_sqrt_n\""));
    assert!(csv.contains("\"n_values\":[9,25]"));
}

#[test]
fn verify_bounds_passes_and_catches_injected_fault() {
    let small = [
        "verify-bounds",
        "--round-instances",
        "5000",
        "--line-instances",
        "200",
        "--plane-instances",
        "50",
    ];
    let ok = run(&small);
    assert!(ok.status.success());
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(
        stdout.contains("single-round: 5000 instances, 0 violations"),
        "{stdout}"
    );

    let mut faulty = small.to_vec();
    faulty.extend(["--bound-scale", "0.9"]);
    let bad = run(&faulty);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stdout).contains("violation seed="));
}

#[test]
fn trace_writes_one_file_per_offset() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "trace",
        "--n",
        "8",
        "--k",
        "3",
        "--seed",
        "1",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for j in 0..3 {
        let text = std::fs::read_to_string(dir.path().join(format!("trace-line-n8-k3-j{j}.jsonl")))
            .unwrap();
        let records: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(records[0]["record"], "instance");
        assert_eq!(records.last().unwrap()["record"], "summary");
        let legs: f64 = records
            .iter()
            .filter(|r| r["record"] == "leg")
            .map(|r| (r["to"].as_f64().unwrap() - r["from"].as_f64().unwrap()).abs())
            .sum();
        let total = records.last().unwrap()["total_distance"].as_f64().unwrap();
        assert!((legs - total).abs() < 1e-12);
    }
}

#[test]
fn zero_displacement_trace_drops_where_it_picks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "trace",
        "--n",
        "6",
        "--k",
        "2",
        "--j",
        "0",
        "--zero-displacement",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("trace-line-n6-k2-j0.jsonl")).unwrap();
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    let mut picks: Vec<(u64, f64)> = summary["pickups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["sensor"].as_u64().unwrap(), s["at"].as_f64().unwrap()))
        .collect();
    let mut drops: Vec<(u64, f64)> = summary["drops"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["sensor"].as_u64().unwrap(), s["at"].as_f64().unwrap()))
        .collect();
    picks.sort_by_key(|p| p.0);
    drops.sort_by_key(|p| p.0);
    assert_eq!(picks, drops);
}

#[test]
fn plane_trace_is_axis_aligned() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "trace",
        "--geometry",
        "plane",
        "--n",
        "9",
        "--k",
        "1",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("trace-plane-m3-k1-j0-0.jsonl")).unwrap();
    let legs: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|r| r["record"] == "leg")
        .collect();
    assert!(!legs.is_empty());
    for leg in &legs {
        let (f, t) = (&leg["from"], &leg["to"]);
        assert!(f[0] == t[0] || f[1] == t[1]);
    }
    let phases: Vec<&str> = legs.iter().map(|l| l["phase"].as_str().unwrap()).collect();
    assert_eq!(phases.first(), Some(&"rows"));
    assert_eq!(phases.last(), Some(&"columns"));
}

#[test]
fn bad_input_exits_with_one_line_diagnostic() {
    let o = run(&["plane-run", "--n", "10", "--trials", "1"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.contains("perfect square"));

    let o = run(&["line-run", "--stretch", "0.5", "--trials", "1"]);
    assert!(!o.status.success());
}
