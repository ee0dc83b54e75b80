use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SQUARE: &str = r#"{"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;
const SEPTAGON: &str = r#"{"vertices": [[0,0],[3,0],[5,1],[6,3],[5,5],[2,6],[0,3]]}"#;

fn tropsand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropsand")).args(args).output().expect("binary runs")
}

fn polygon(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn relax_without_points_is_trivial() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let out = tmp.path().join("r");
    let o = tropsand(&["relax", "--polygon", &sq, "--scale", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["topplings"], 0);
    assert_eq!(r["lost"], 0);
    let csv = fs::read_to_string(out.join("state.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,height"));
    assert_eq!(csv.lines().count(), 1 + 11 * 11);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",3")));
    let odo = fs::read_to_string(out.join("odometer.csv")).unwrap();
    assert!(odo.lines().skip(1).all(|l| l.ends_with(",0")));
    let pgm = fs::read_to_string(out.join("state.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n"));
    assert!(pgm.lines().skip(3).flat_map(str::split_whitespace).all(|v| v == "255"));
}

#[test]
fn relax_one_point_draws_defects() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let out = tmp.path().join("r");
    let o = tropsand(&["relax", "--polygon", &sq, "--points", "1/3,1/4", "--scale", "40", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = report(&out);
    assert_eq!(r["grains"], serde_json::json!([[13, 10]]));
    assert!(r["defects"].as_u64().unwrap() > 0);
    let pgm = fs::read_to_string(out.join("state.pgm")).unwrap();
    let mut lines = pgm.lines();
    assert_eq!(lines.next(), Some("P2"));
    let dims: Vec<usize> = lines.next().unwrap().split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(lines.next(), Some("255"));
    let pixels: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
    assert_eq!(pixels.len(), dims[0] * dims[1]);
    assert!(pixels.iter().all(|p| ["0", "85", "170", "255"].contains(p)));
    assert!(pixels.iter().any(|&p| p != "255"));
}

#[test]
fn relax_rejects_outside_point() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let o = tropsand(&["relax", "--polygon", &sq, "--points", "3/2,1/2", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn relax_budget_and_seed() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let dir = tmp.path().to_str().unwrap();
    let base = ["relax", "--polygon", &sq, "--points", "1/2,1/2", "--scale", "20", "--out", dir];
    assert_eq!(code(&tropsand(&[&base[..], &["--budget", "5"]].concat())), 4);
    assert_eq!(code(&tropsand(&[&base[..], &["--schedule", "random"]].concat())), 2);
    let o = tropsand(&[&base[..], &["--schedule", "random", "--seed", "7"]].concat());
    assert_eq!(code(&o), 0);
    let random = fs::read_to_string(tmp.path().join("state.csv")).unwrap();
    assert_eq!(code(&tropsand(&base)), 0);
    assert_eq!(fs::read_to_string(tmp.path().join("state.csv")).unwrap(), random);
}

#[test]
fn tropical_square_center_gives_diagonals() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let out = tmp.path().join("t");
    let o = tropsand(&["tropical", "--polygon", &sq, "--points", "1/2,1/2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let curve: Value = serde_json::from_str(&fs::read_to_string(out.join("curve.json")).unwrap()).unwrap();
    let edges = curve["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 4);
    for e in edges {
        let d = e["direction"].as_array().unwrap();
        assert_eq!(d[0].as_i64().unwrap().abs(), 1);
        assert_eq!(d[1].as_i64().unwrap().abs(), 1);
    }
    let r = report(&out);
    assert_eq!(r["integral"]["exact"], "1/6");
    assert_eq!(r["balanced"], true);
    assert!(out.join("polynomial.json").exists());
}

#[test]
fn tropical_needs_points() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let o = tropsand(&["tropical", "--polygon", &sq, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn septagon_has_heavy_edges() {
    let tmp = TempDir::new().unwrap();
    let sep = polygon(tmp.path(), "sep.json", SEPTAGON);
    let pts = "7/5,6/5;16/5,7/5;21/5,11/5;24/5,17/5;19/5,21/5;11/5,22/5;6/5,14/5";
    let o = tropsand(&["tropical", "--polygon", &sep, "--points", pts, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = report(tmp.path());
    assert!(r["max_weight"].as_u64().unwrap() > 1, "{r}");
    assert_eq!(r["symplectic_area"], r["boundary_area"]);
}

#[test]
fn compare_checks_scales_and_polygon() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let bad = polygon(tmp.path(), "bad.json", r#"{"vertices": [[0, 0], [1, 0]"#);
    let dir = tmp.path().to_str().unwrap();
    assert_eq!(code(&tropsand(&["compare", "--polygon", &sq, "--points", "1/3,1/4", "--scales", "50", "--assert", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["compare", "--polygon", &bad, "--scales", "8,16", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["compare", "--polygon", &sq, "--scales", "16,8", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["compare", "--polygon", "/nonexistent/p.json", "--scales", "8,16", "--out", dir])), 1);
}

#[test]
fn compare_decreasing_error() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let o = tropsand(&["compare", "--polygon", &sq, "--points", "1/3,1/4", "--scales", "25,50,100", "--assert", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(tmp.path());
    assert_eq!(r["sup_error_decreasing"], true);
    assert_eq!(r["results"].as_array().unwrap().len(), 3);
}

#[test]
fn identical_runs_identical_files() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|name| {
            let out = tmp.path().join(name);
            let o = out.to_str().unwrap();
            assert_eq!(code(&tropsand(&["relax", "--polygon", &sq, "--points", "1/3,1/4;2/3,1/2", "--scale", "30", "--out", o])), 0);
            assert_eq!(code(&tropsand(&["tropical", "--polygon", &sq, "--points", "1/3,1/4;2/3,1/2", "--out", o])), 0);
            out
        })
        .collect();
    for f in ["state.csv", "state.pgm", "odometer.csv", "report.json", "curve.json", "polynomial.json"] {
        assert_eq!(fs::read(runs[0].join(f)).unwrap(), fs::read(runs[1].join(f)).unwrap(), "{f}");
    }
}

#[test]
fn timing_is_opt_in() {
    let tmp = TempDir::new().unwrap();
    let sq = polygon(tmp.path(), "sq.json", SQUARE);
    let dir = tmp.path().to_str().unwrap();
    tropsand(&["relax", "--polygon", &sq, "--scale", "8", "--out", dir]);
    assert!(report(tmp.path()).get("wall_ms").is_none());
    tropsand(&["relax", "--polygon", &sq, "--scale", "8", "--out", dir, "--timing"]);
    assert!(report(tmp.path())["wall_ms"].is_u64());
}

#[test]
fn soliton_and_wave_speed() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = tropsand(&["soliton", "--direction", "1,2", "--waves", "200", "--out", dir]);
    assert_eq!(code(&o), 0);
    let r = report(tmp.path());
    assert_eq!(r["linear_fraction"], 1.0);
    assert!(!r["moving"].as_array().unwrap().is_empty());
    assert!(fs::read_to_string(tmp.path().join("soliton.pgm")).unwrap().starts_with("P2\n2 "));
    assert_eq!(code(&tropsand(&["soliton", "--direction", "2,4", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["soliton", "--direction", "1,2", "--waves", "3", "--out", dir])), 4);

    let o = tropsand(&["wave-speed", "--direction", "1,-1", "--waves", "20", "--assert", "--out", dir]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(tmp.path())["level_shift"]["exact"], "20");
}

#[test]
fn smooth_corner_runs() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = tropsand(&["smooth-corner", "--corner", "0,0,3,2,1,1", "--radius", "8", "--assert", "--out", dir]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(tmp.path());
    assert!(r["rounds"].as_u64().unwrap() > 0);
    let csv = fs::read_to_string(tmp.path().join("corner.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 17 * 17);
    assert_eq!(code(&tropsand(&["smooth-corner", "--corner", "0,0,2,0,0,1", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["smooth-corner", "--corner", "1,2,3", "--out", dir])), 2);
    assert_eq!(code(&tropsand(&["smooth-corner", "--corner", "0,0,3,2,1,1", "--radius", "8", "--budget", "0", "--out", dir])), 4);
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(code(&tropsand(&["relax", "-p", "x"])), 2);
    assert_eq!(code(&tropsand(&["frobnicate"])), 2);
}
