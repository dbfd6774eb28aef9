//! Black-box checks of the `glv` binary.

use std::path::Path;
use std::process::{Command, Output};

fn glv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_scenarios_names_all_campaigns() {
    let out = glv(&["list-scenarios"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "point_to_point",
        "linearity_pilot",
        "frequency_response",
        "sensitivity_heatmap",
        "distance_sweep",
        "alarm_map",
        "single_glv_comparison",
    ] {
        assert!(text.lines().any(|l| l == name), "missing scenario {name}");
    }
}

#[test]
fn validate_default_config_reports_provenance() {
    let out = glv(&["validate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("provenance"));
    assert!(text.contains("config ok"));
    assert!(text.contains("placeholder"), "r_liq placeholders should be flagged");
}

#[test]
fn bad_override_exits_with_config_code() {
    let out = glv(&["run", "--set", "no-equals-sign"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_scenario_exits_with_config_code() {
    let out = glv(&["run", "--set", "scenario=does_not_exist"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does_not_exist"));
}

fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn rerun_with_same_seed_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = glv(&[
            "run",
            "--seed",
            "7",
            "--set",
            "campaigns.point_to_point.horizon_s=60",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (fa, fb) = (read_dir_files(&a), read_dir_files(&b));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"air_trace.csv"));
    assert!(names.contains(&"trajectory.csv"));
    assert!(names.contains(&"manifest.json"));
    assert!(names.contains(&"summary.txt"));
    for ((name_a, bytes_a), (name_b, bytes_b)) in fa.iter().zip(&fb) {
        assert_eq!(name_a, name_b);
        if name_a == "manifest.json" {
            // identical except the wall-time field
            let strip = |b: &[u8]| {
                String::from_utf8_lossy(b)
                    .lines()
                    .filter(|l| !l.contains("wall_time"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(strip(bytes_a), strip(bytes_b));
        } else {
            assert_eq!(bytes_a, bytes_b, "{name_a} differs between reruns");
        }
    }
}

#[test]
fn seed_changes_the_data() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, seed) in [(&a, "7"), (&b, "8")] {
        let out = glv(&[
            "run",
            "--seed",
            seed,
            "--set",
            "campaigns.point_to_point.horizon_s=60",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let trace = |d: &Path| std::fs::read(d.join("air_trace.csv")).unwrap();
    assert_ne!(trace(&a), trace(&b));
}

#[test]
fn manifest_embeds_the_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let out = glv(&[
        "run",
        "--seed",
        "11",
        "--set",
        "campaigns.point_to_point.horizon_s=60",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"master_seed\": 11"));
    assert!(manifest.contains("horizon_s = 60"));
}
