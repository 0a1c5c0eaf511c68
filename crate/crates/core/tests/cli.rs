use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use avmac::channel::library;
use avmac::cli::{parse_channel_file, write_channel_file};
use serde_json::Value;

fn avmac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avmac")).args(args).output().expect("binary runs")
}

fn channel(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../channels").join(name).to_str().unwrap().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn out(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn xor_is_symmetrizable_beyond_a_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = out(&dir, "sym.json");
    let o = avmac(&["symmetrizability", "--channel", &channel("binary_xor.toml"), "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&path);
    assert!(doc["result"]["order"].as_u64().unwrap() >= 2);
    assert_eq!(doc["manifest"]["input_digest"].as_str().unwrap().len(), 64);
    assert!(doc["manifest"].get("wall_clock_seconds").is_none());
}

#[test]
fn a_budget_below_every_state_cost_gives_order_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = out(&dir, "tight.toml");
    let mut ch = library::shifted_adder(0.3);
    ch.lambda = ch.g.iter().copied().fold(f64::INFINITY, f64::min) * 0.5;
    write_channel_file(&ch, &file).unwrap();
    let o = avmac(&["symmetrizability", "--channel", file.to_str().unwrap(), "--mode", "strong"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["order"], 0);
    assert!(doc["result"]["witness"].is_null());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (json_path, csv_path) = (out(&dir, "run.json"), out(&dir, "run.csv"));
    let args = [
        "simulate", "discrete", "--channel", &channel("binary_xor.toml"), "--n", "24", "--m", "16", "--w", "16",
        "--list-size", "2", "--jammer", "iid", "--state-law", "0.7,0.3", "--trials", "100", "--seed", "11",
        "--out", json_path.to_str().unwrap(), "--per-trial", csv_path.to_str().unwrap(),
    ];
    let mut seen = Vec::new();
    for _ in 0..2 {
        assert!(avmac(&args).status.success());
        seen.push((std::fs::read(&json_path).unwrap(), std::fs::read(&csv_path).unwrap()));
    }
    assert_eq!(seen[0], seen[1]);
    let csv = String::from_utf8(seen[0].1.clone()).unwrap();
    assert!(csv.starts_with("trial,error,fallback,cert\n"));
    assert_eq!(csv.lines().count(), 101);
}

#[test]
fn a_fully_symmetrizable_channel_has_a_degenerate_region() {
    let dir = tempfile::tempdir().unwrap();
    let path = out(&dir, "region.csv");
    let o = avmac(&[
        "region", "--channel", &channel("binary_xor.toml"), "--list-size", "1", "--u-card", "1", "--mode", "inner",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "R1,R2,mode\n0,0,inner\n");
    assert_eq!(json(&dir.path().join("region.csv.manifest.json"))["subcommand"], "region");
}

#[test]
fn a_single_state_gives_the_adder_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let path = out(&dir, "adder.csv");
    let o = avmac(&[
        "region", "--channel", &channel("noiseless_adder.toml"), "--list-size", "1", "--mode", "inner",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let points: Vec<(f64, f64)> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    let best_sum = points.iter().map(|p| p.0 + p.1).fold(0.0, f64::max);
    assert!((best_sum - 1.5).abs() < 1e-9, "{points:?}");
    assert!(points.iter().all(|p| p.0 <= 1.0 + 1e-9 && p.1 <= 1.0 + 1e-9));
}

#[test]
fn bad_arguments_exit_with_two() {
    let o = avmac(&["simulate", "gaussian", "--state-power", "1", "--n", "8", "--m", "4", "--w", "4",
        "--list-size", "1", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = avmac(&["symmetrizability", "--channel", "/nonexistent/channel.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
    assert_eq!(avmac(&["--help"]).status.code(), Some(0));
}

#[test]
fn shipped_channel_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["binary_xor.toml", "noiseless_adder.toml", "shifted_adder.toml"] {
        let ch = parse_channel_file(channel(name)).unwrap();
        let copy = out(&dir, name);
        write_channel_file(&ch, &copy).unwrap();
        assert_eq!(parse_channel_file(&copy).unwrap(), ch);
    }
    assert_eq!(parse_channel_file(channel("binary_xor.toml")).unwrap().w, library::binary_xor(0.6).w);
}

#[test]
fn superposition_attack_beats_its_error_floor() {
    let dir = tempfile::tempdir().unwrap();
    let path = out(&dir, "gauss.json");
    let o = avmac(&[
        "simulate", "gaussian", "--state-power", "2.5", "--sigma2", "0.3", "--n", "64", "--m", "128", "--w", "128",
        "--list-size", "2", "--jammer", "superposition", "--trials", "500", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json(&path)["result"];
    let sp = &r["superposition"];
    assert!(r["summary"]["error_rate"].as_f64().unwrap() >= sp["error_floor"].as_f64().unwrap());
    assert!(r["summary"]["certificate_rate"].as_f64().unwrap() >= sp["certificate_floor"].as_f64().unwrap());
    assert_eq!(r["summary"]["symmetry_violations"], 0);
}
