use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use prismtrack_core::sync::SyncPolicy;
use serde_json::Value;

fn prismtrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prismtrack")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = prismtrack(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const LINE: &str = "[path]\nkind = \"line\"\nspeed = 1.0\nduration = 40.0\nheading = 0.3\norigin = [8.0, 6.0, -1.2]\n";

/// A workspace holding one synthesized experiment `a`.
fn synth(extra: &str) -> (tempfile::TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("spec.toml");
    fs::write(&spec, format!("{LINE}{extra}")).unwrap();
    let ws = tmp.path().join("ws");
    ok(&["synth", s(&spec), s(&ws), "--id", "a", "--seed", "5"]);
    (tmp, ws)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn noiseless_calibration_reports_tiny_rmse() {
    let (_tmp, ws) = synth("[noise]\ngcp_sigma = 0.0\n");
    ok(&["calibrate", s(&ws), "a"]);
    let stations = json(&ws.join("a/derived/stations.json"));
    let list = stations["stations"].as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(stations["reference_station"], "station0");
    for st in list {
        assert!(st["rmse"].as_f64().unwrap() <= 1e-9);
        assert_eq!(st["gcp_count"], 10);
    }
}

#[test]
fn missing_gcp_file_exits_2_and_names_it() {
    let (_tmp, ws) = synth("");
    let gone = ws.join("a/raw/gcp_station1.csv");
    fs::remove_file(&gone).unwrap();
    let out = prismtrack(&["calibrate", s(&ws), "a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gcp_station1.csv"), "{}", stderr(&out));
}

#[test]
fn reconstruct_before_calibrate_exits_2() {
    let (_tmp, ws) = synth("");
    let out = prismtrack(&["reconstruct", s(&ws), "a", "--system", "rts"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("stations.json"));
}

#[test]
fn collinear_control_points_exit_4() {
    let (_tmp, ws) = synth("");
    for k in 0..3 {
        let path = ws.join(format!("a/raw/gcp_station{k}.csv"));
        let text = fs::read_to_string(&path).unwrap();
        let mut out = String::new();
        for line in text.lines() {
            if line.starts_with('#') || line.starts_with('t') {
                out.push_str(line);
            } else {
                let t: f64 = line.split(',').next().unwrap().parse().unwrap();
                out.push_str(&format!("{t},0.5,0,{}", 5.0 + t));
            }
            out.push('\n');
        }
        fs::write(&path, out).unwrap();
    }
    let out = prismtrack(&["calibrate", s(&ws), "a"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("degenerate"), "{}", stderr(&out));
}

#[test]
fn streams_without_overlap_exit_3() {
    let (_tmp, ws) = synth("");
    ok(&["calibrate", s(&ws), "a"]);
    let path = ws.join("a/raw/rts_prism2.csv");
    let shifted: String = fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|line| match line.split_once(',') {
            Some((t, rest)) if !line.starts_with('t') => format!("{},{rest}\n", t.parse::<f64>().unwrap() + 1000.0),
            _ => format!("{line}\n"),
        })
        .collect();
    fs::write(&path, shifted).unwrap();
    let out = prismtrack(&["reconstruct", s(&ws), "a", "--system", "rts"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

/// Reference instants of stream 0 that every other stream brackets within `max_gap`.
fn predicted_triplets(logs: &[Vec<f64>; 3], max_gap: f64) -> usize {
    logs[0]
        .iter()
        .filter(|&&t| {
            logs[1..].iter().all(|times| {
                if times.contains(&t) {
                    return true;
                }
                let after = times.iter().position(|&u| u > t);
                matches!(after, Some(i) if i > 0 && times[i] - times[i - 1] <= max_gap)
            })
        })
        .count()
}

fn log_times(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn default_noise_pose_count_matches_prediction() {
    let (_tmp, ws) = synth("");
    ok(&["calibrate", s(&ws), "a"]);
    ok(&["reconstruct", s(&ws), "a", "--system", "rts"]);
    let logs = [0, 1, 2].map(|k| log_times(&ws.join(format!("a/raw/rts_prism{k}.csv"))));
    let expected = predicted_triplets(&logs, SyncPolicy::default().max_gap);
    let meta = json(&ws.join("a/derived/rts/meta.json"));
    assert_eq!(meta["counts"]["triplets"].as_u64().unwrap() as usize, expected);
    assert_eq!(meta["counts"]["poses"].as_u64().unwrap() as usize, expected);
    let poses = fs::read_to_string(ws.join("a/derived/rts/poses.csv")).unwrap();
    assert_eq!(poses.lines().count(), expected + 1);
}

#[test]
fn disjoint_experiments_compare_to_an_empty_set() {
    let tmp = tempfile::tempdir().unwrap();
    let ws = tmp.path().join("ws");
    let near = tmp.path().join("near.toml");
    let far = tmp.path().join("far.toml");
    fs::write(&near, LINE).unwrap();
    fs::write(&far, LINE.replace("[8.0, 6.0, -1.2]", "[8.0, 90.0, -1.2]")).unwrap();
    ok(&["synth", s(&near), s(&ws), "--id", "near"]);
    ok(&["synth", s(&far), s(&ws), "--id", "far"]);
    for id in ["near", "far"] {
        ok(&["calibrate", s(&ws), id]);
        ok(&["reconstruct", s(&ws), id, "--system", "rts"]);
    }
    let out = prismtrack(&["compare", s(&ws), "near", "far", "--radius", "2.0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&ws.join("comparisons/near__far/report.json"));
    let rts = &report["systems"][0];
    assert_eq!(rts["count"], 0);
    assert_eq!(rts["matches"], 0);
    assert!(rts["summary"].is_null());
    assert_eq!(report["metadata"]["radius"], 2.0);
    let boxplot = fs::read_to_string(ws.join("comparisons/near__far/boxplot.csv")).unwrap();
    assert!(boxplot.contains("rts,all,0,,,,,,"));
}

#[test]
fn swapping_experiments_negates_disparities() {
    let tmp = tempfile::tempdir().unwrap();
    let ws = tmp.path().join("ws");
    let spec = tmp.path().join("spec.toml");
    fs::write(&spec, LINE).unwrap();
    for (id, seed) in [("a", "1"), ("b", "2")] {
        ok(&["synth", s(&spec), s(&ws), "--id", id, "--seed", seed]);
        ok(&["calibrate", s(&ws), id]);
        ok(&["reconstruct", s(&ws), id, "--system", "rts"]);
    }
    ok(&["compare", s(&ws), "a", "b"]);
    ok(&["compare", s(&ws), "b", "a"]);
    let ab = json(&ws.join("comparisons/a__b/report.json"));
    let ba = json(&ws.join("comparisons/b__a/report.json"));
    // identical sampling grids make A→B and B→A matching one-to-one
    let x: Vec<f64> = ab["systems"][0]["disparities"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let y: Vec<f64> = ba["systems"][0]["disparities"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(x.len(), y.len());
    assert!(x.iter().zip(&y).all(|(p, q)| *p == -*q));
    assert_eq!(ab["systems"][0]["summary"], ba["systems"][0]["summary"]);
}

#[test]
fn reports_embed_every_tunable() {
    let (_tmp, ws) = synth("");
    ok(&["calibrate", s(&ws), "a"]);
    ok(&["reconstruct", s(&ws), "a", "--system", "gnss", "--max-gap", "0.7", "--reference", "grid:0.5", "--admit-float"]);
    ok(&["evaluate", s(&ws), "a"]);
    let report = json(&ws.join("a/reports/report.json"));
    let meta = &report["metadata"];
    assert!(meta["quantile_convention"].as_str().unwrap().contains("type 7"));
    assert_eq!(meta["match_anchor"], "target0");
    assert_eq!(meta["radius"], 2.0);
    assert!(meta["definition"].as_str().unwrap().contains("signed"));
    let gnss = &report["systems"][0];
    assert_eq!(gnss["system"], "gnss");
    assert_eq!(gnss["sync_policy"]["max_gap"], 0.7);
    assert_eq!(gnss["sync_policy"]["reference"], "grid:0.5");
    assert_eq!(gnss["sync_policy"]["max_speed"], 5.0);
    assert_eq!(gnss["admit_float"], true);
    assert_eq!(gnss["reject_threshold"], 0.05);
    let csv = fs::read_to_string(ws.join("a/reports/inter_distance_gnss.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,e01,e02,e12"));
    assert_eq!(csv.lines().count() - 1, gnss["triplets"].as_u64().unwrap() as usize);
}

#[test]
fn workspace_config_is_validated() {
    let (_tmp, ws) = synth("");
    let cfg = ws.join("workspace.toml");
    let text = fs::read_to_string(&cfg).unwrap();
    fs::write(&cfg, text.replace("schema_version = 1", "schema_version = 9")).unwrap();
    let out = prismtrack(&["calibrate", s(&ws), "a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("schema_version"));

    fs::write(&cfg, format!("{text}\n[extra]\nkey = 1\n")).unwrap();
    assert_eq!(code(&prismtrack(&["calibrate", s(&ws), "a"])), 2);

    fs::write(&cfg, text.replace("match_anchor = \"target0\"", "match_anchor = \"prism9\"")).unwrap();
    assert_eq!(code(&prismtrack(&["calibrate", s(&ws), "a"])), 2);
}

#[test]
fn bad_flags_and_ids_exit_2() {
    let (_tmp, ws) = synth("");
    ok(&["calibrate", s(&ws), "a"]);
    for args in [
        vec!["reconstruct", s(&ws), "a", "--system", "rts", "--reference", "grid:-1"],
        vec!["reconstruct", s(&ws), "a", "--system", "rts", "--max-gap", "0"],
        vec!["reconstruct", s(&ws), "a", "--system", "laser"],
        vec!["compare", s(&ws), "a", "a", "--radius", "-2"],
        vec!["compare", s(&ws), "a", "a", "--match-anchor", "middle"],
        vec!["evaluate", s(&ws), "../a"],
        vec!["evaluate", s(&ws), "missing"],
    ] {
        assert_eq!(code(&prismtrack(&args)), 2, "{args:?}");
    }
}

#[test]
fn evaluate_requires_reconstruction() {
    let (_tmp, ws) = synth("");
    let out = prismtrack(&["evaluate", s(&ws), "a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("reconstruct"));
}

#[test]
fn excluded_outliers_are_counted() {
    let (_tmp, ws) = synth("");
    ok(&["calibrate", s(&ws), "a"]);
    ok(&["reconstruct", s(&ws), "a", "--system", "rts"]);
    // flag one pose by hand and check the flag is honored
    let q = ws.join("a/derived/rts/pose_quality.csv");
    let text = fs::read_to_string(&q).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    assert!(lines[3].ends_with(",0"));
    lines[3].pop();
    lines[3].push('1');
    fs::write(&q, lines.join("\n") + "\n").unwrap();
    ok(&["evaluate", s(&ws), "a", "--exclude-outliers"]);
    let report = json(&ws.join("a/reports/report.json"));
    assert_eq!(report["systems"][0]["excluded_outliers"], 1);
    assert_eq!(report["metadata"]["exclude_outliers"], true);
}

#[test]
fn synth_rejects_unknown_keys_and_missing_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let ws = tmp.path().join("ws");
    let spec = tmp.path().join("spec.toml");
    fs::write(&spec, format!("{LINE}[noise]\nrts_sigma = 0.1\n")).unwrap();
    assert_eq!(code(&prismtrack(&["synth", s(&spec), s(&ws)])), 2);
    fs::write(&spec, "[path]\nkind = \"circle\"\nspeed = 1.0\nduration = 10.0\n").unwrap();
    let out = prismtrack(&["synth", s(&spec), s(&ws)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("radius"));
    assert_eq!(code(&prismtrack(&["synth", s(&tmp.path().join("nope.toml")), s(&ws)])), 2);
}
