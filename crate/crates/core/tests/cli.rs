use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dikin_cone::cli::Report;
use tempfile::TempDir;

fn conectl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conectl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

const AXIS: &str = r#"{
  "schema_version": 1,
  "dimension": 3,
  "center": [1.0, 1.0, 1.0],
  "cone": { "kind": "axis", "index": 1 },
  "system": [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
  "options": { "samples": 500, "trajectories": 2, "horizon": 1.0, "resolution": 8 }
}"#;

const ROTATION: &str = r#"{
  "schema_version": 1,
  "dimension": 2,
  "cone": { "kind": "standard" },
  "system": [[0.0, -1.0], [1.0, 0.0]],
  "initial_points": [[0.7071067811865476, 0.7071067811865476]],
  "options": { "samples": 200, "scan": { "min": -2.0, "max": 2.0, "count": 5 } }
}"#;

#[test]
fn construct_axis_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "axis.json", AXIS);
    let out = conectl(&["construct", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = report(&out).construction.unwrap();
    assert_eq!(
        c.q,
        vec![
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, 0.0],
            vec![-1.0, 0.0, 1.0]
        ]
    );
    assert_eq!(c.axis_index, Some(1));
    assert!(c.residuals.unwrap().max() < 1e-12);
}

#[test]
fn construct_ones_and_sphere() {
    let dir = TempDir::new().unwrap();
    let ones = write(
        dir.path(),
        "ones.json",
        r#"{"schema_version":1,"dimension":3,"center":[1,1,1],"cone":{"kind":"ones"}}"#,
    );
    let q = report(&conectl(&["construct", "--config", ones.to_str().unwrap()]))
        .construction
        .unwrap()
        .q;
    for (i, row) in q.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 5.0 / 9.0 } else { -4.0 / 9.0 };
            assert!((v - want).abs() < 1e-15);
        }
    }
    let sphere = write(
        dir.path(),
        "sphere.json",
        r#"{"schema_version":1,"dimension":3,"center":[0,0,2],"cone":{"kind":"sphere_tangent"}}"#,
    );
    let q = report(&conectl(&[
        "construct",
        "--config",
        sphere.to_str().unwrap(),
    ]))
    .construction
    .unwrap()
    .q;
    assert!((q[2][2] + 1.0 / 3.0).abs() < 1e-15);
    assert_eq!((q[0][0], q[1][1]), (1.0, 1.0));
}

#[test]
fn spectrum_of_unit_axis_cone() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "axis.json", AXIS);
    let s = report(&conectl(&["spectrum", "--config", cfg.to_str().unwrap()]))
        .spectrum
        .unwrap();
    let r2 = 2f64.sqrt();
    for (got, want) in s.eigenvalues.iter().zip([1.0 + r2, 1.0, 1.0 - r2]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((s.det_numeric + 1.0).abs() < 1e-12);
    assert_eq!(s.inertia.to_string(), "(2, 0, 1)");
    assert!(s.lambda1_lower.unwrap() <= s.eigenvalues[0] + 1e-12);
    assert!(s.eigenvalues[0] <= s.lambda1_upper.unwrap() + 1e-12);
}

#[test]
fn certify_exit_codes_and_scan() {
    let dir = TempDir::new().unwrap();
    let axis = write(dir.path(), "axis.json", AXIS);
    let out = conectl(&["certify", "--config", axis.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).certificate.unwrap().feasible);
    assert!(report(&out).scan.is_none());

    let rot = write(dir.path(), "rot.json", ROTATION);
    let out = conectl(&["certify", "--config", rot.to_str().unwrap(), "--scan"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert!(!r.certificate.unwrap().feasible);
    assert_eq!(r.scan.unwrap().len(), 5);
}

#[test]
fn falsify_and_simulate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let rot = write(dir.path(), "rot.json", ROTATION);
    let out = conectl(&["falsify", "--config", rot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(report(&out).falsifier.unwrap().counterexample.is_some());
    let out = conectl(&[
        "simulate",
        "--config",
        rot.to_str().unwrap(),
        "--horizon",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let t = report(&out).trajectories.unwrap();
    assert!(t[0].exited && t[0].steps == 3000);

    let axis = write(dir.path(), "axis.json", AXIS);
    assert_eq!(
        conectl(&["falsify", "--config", axis.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let out = conectl(&["simulate", "--config", axis.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).trajectories.unwrap().len(), 2);
}

#[test]
fn standardize_reports_congruence() {
    let dir = TempDir::new().unwrap();
    let axis = write(dir.path(), "axis.json", AXIS);
    let s = report(&conectl(&[
        "standardize",
        "--config",
        axis.to_str().unwrap(),
    ]))
    .standardization
    .unwrap();
    assert!(s.congruence_residual < 1e-12);
}

#[test]
fn mesh_writes_obj_and_csv() {
    let dir = TempDir::new().unwrap();
    let axis = write(dir.path(), "axis.json", AXIS);
    let stem = dir.path().join("fig");
    let out = conectl(&[
        "mesh",
        "--config",
        axis.to_str().unwrap(),
        "--out",
        stem.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m = report(&out).mesh.unwrap();
    assert_eq!((m.cone_vertices, m.ellipsoid_vertices), (65, 66));
    let obj = std::fs::read_to_string(stem.with_extension("obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 131);
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert!(csv.starts_with("x,y,z,surface\n"));

    let rot = write(dir.path(), "rot.json", ROTATION);
    assert_eq!(
        conectl(&["mesh", "--config", rot.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn report_round_trips_and_out_flag() {
    let dir = TempDir::new().unwrap();
    let axis = write(dir.path(), "axis.json", AXIS);
    let path = dir.path().join("report.json");
    let out = conectl(&[
        "certify",
        "--config",
        axis.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
        "--scan",
    ]);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", parsed.to_json().unwrap()), text);

    let echo = write(
        dir.path(),
        "echo.json",
        &serde_json::to_string(&parsed.config).unwrap(),
    );
    let again = dir.path().join("again.json");
    conectl(&[
        "certify",
        "--config",
        echo.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--scan",
    ]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn usage_errors_exit_two_without_panicking() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("garbage.json", "not json"),
        (
            "version.json",
            r#"{"schema_version":9,"dimension":2,"cone":{"kind":"standard"}}"#,
        ),
        (
            "neg.json",
            r#"{"schema_version":1,"dimension":2,"center":[1,-1],"cone":{"kind":"ones"}}"#,
        ),
        (
            "len.json",
            r#"{"schema_version":1,"dimension":3,"center":[1,1],"cone":{"kind":"ones"}}"#,
        ),
        (
            "index.json",
            r#"{"schema_version":1,"dimension":2,"center":[1,1],"cone":{"kind":"axis","index":0}}"#,
        ),
        (
            "inside.json",
            r#"{"schema_version":1,"dimension":2,"center":[0.5,0],"cone":{"kind":"sphere_tangent"}}"#,
        ),
        (
            "notcone.json",
            r#"{"schema_version":1,"dimension":2,"cone":{"kind":"matrix","q":[[1,0],[0,1]]}}"#,
        ),
        (
            "unknown.json",
            r#"{"schema_version":1,"dimension":2,"cone":{"kind":"standard"},"extra":1}"#,
        ),
    ];
    for (name, body) in cases {
        let cfg = write(dir.path(), name, body);
        let out = conectl(&["construct", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains("conectl:") && !stderr.contains("panicked"),
            "{name}: {stderr}"
        );
    }
    let axis = write(
        dir.path(),
        "ones.json",
        r#"{"schema_version":1,"dimension":2,"center":[1,1],"cone":{"kind":"ones"}}"#,
    );
    assert_eq!(
        conectl(&["certify", "--config", axis.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(conectl(&["spectrum"]).status.code(), Some(2));
    assert_eq!(conectl(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        conectl(&["construct", "--config", "/no/such/file.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn seed_controls_randomized_commands() {
    let dir = TempDir::new().unwrap();
    let axis = write(dir.path(), "axis.json", AXIS);
    let cfg = axis.to_str().unwrap();
    let a = conectl(&["simulate", "--config", cfg, "--seed", "1"]);
    let b = conectl(&["simulate", "--config", cfg, "--seed", "1"]);
    let c = conectl(&["simulate", "--config", cfg, "--seed", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
