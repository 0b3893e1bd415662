use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn qst(dir: &Path, sub: &str, config: &Value, extra: &[&str]) -> Output {
    let path = dir.join(format!("{sub}.config.json"));
    std::fs::write(&path, config.to_string()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qst"))
        .arg(sub)
        .arg("--config")
        .arg(&path)
        .args(extra)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn csv_rows(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn engineer_profiles() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("profile.json");
    let run = qst(
        dir.path(),
        "engineer",
        &json!({"N": 4, "m": 0}),
        &["--out", out.to_str().unwrap()],
    );
    assert_eq!(run.status.code(), Some(0));
    let profile: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let values: Vec<f64> = serde_json::from_value(profile["values"].clone()).unwrap();
    let expected = [3f64.sqrt(), 2.0, 3f64.sqrt()];
    assert!(values.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
    assert_eq!(stdout_json(&run)["status"], "complete");

    let run = qst(dir.path(), "engineer", &json!({"N": 2, "m": 0}), &[]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout_json(&run)["outputs"]["profile"]["values"], json!([1.0]));

    let run = qst(dir.path(), "engineer", &json!({"N": 5, "m": 1}), &[]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("odd N unsupported for m>0"));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let run = qst(
        dir.path(),
        "verify",
        &json!({"system": {"kind": "engineered", "N": 6, "m": 0}, "mode": "spmc"}),
        &[],
    );
    assert_eq!(run.status.code(), Some(0));
    let tau = stdout_json(&run)["outputs"]["report"]["tau"].as_f64().unwrap();
    assert!((tau - std::f64::consts::FRAC_PI_2).abs() < 1e-9);

    let run = qst(
        dir.path(),
        "verify",
        &json!({"system": {"kind": "uniform", "N": 4}, "mode": "spmc"}),
        &[],
    );
    assert_eq!(run.status.code(), Some(1));
    assert_eq!(stdout_json(&run)["status"], "fail");

    let run = qst(
        dir.path(),
        "verify",
        &json!({"system": {"kind": "lattice", "axes": [{"N": 4, "m": 1}, {"N": 2, "m": 0}]}, "mode": "ssmc", "tau": std::f64::consts::FRAC_PI_2}),
        &[],
    );
    assert_eq!(run.status.code(), Some(0));

    for bad in [
        json!({"system": {"kind": "engineered", "N": 6, "m": 0}, "mode": "ssmc"}),
        json!({"system": {"kind": "ring", "N": 8}, "mode": "spmc"}),
        json!({"system": {"kind": "engineered", "N": 6}, "mode": "spmc"}),
        json!({"mode": "spmc"}),
        json!([1, 2]),
    ] {
        assert_eq!(
            qst(dir.path(), "verify", &bad, &[]).status.code(),
            Some(2),
            "{bad}"
        );
    }
    // not JSON at all
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"mode\": ").unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_qst"))
        .args(["verify", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
    let run = Command::new(env!("CARGO_BIN_EXE_qst"))
        .args(["verify", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn spectrum_csv_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("spectrum.csv");
    let run = qst(
        dir.path(),
        "spectrum",
        &json!({"system": {"kind": "engineered", "N": 4, "m": 1}}),
        &["--out", out.to_str().unwrap()],
    );
    assert_eq!(run.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("index,eigenvalue\n"));
    let levels: Vec<f64> = csv_rows(&csv).iter().map(|r| r.1).collect();
    for (a, b) in levels.iter().zip([-5.0, -3.0, 3.0, 5.0]) {
        assert!((a - b).abs() < 1e-9);
    }
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(sidecar["outputs"]["middle_gap"], json!(6.0));
    assert_eq!(sidecar["command"], "spectrum");
}

#[test]
fn mirror_curve_reaches_one_at_half_pi() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("mirror.csv");
    let config = json!({
        "lattice": {"axes": [{"N": 4, "m": 0}]},
        "initial": {"site": [1]},
        "grid": {"t_min": 0.0, "t_max": 3.0, "steps": 30}
    });
    let run = qst(dir.path(), "mirror", &config, &["--out", out.to_str().unwrap()]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let (_, f) = rows
        .iter()
        .find(|(t, _)| *t == std::f64::consts::FRAC_PI_2)
        .expect("π/2 row");
    assert!(*f >= 1.0 - 1e-9);
    assert_eq!(rows.len(), 32);
}

#[test]
fn ring_peak_near_translation_time() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ring.csv");
    let config = json!({
        "N": 128, "J": 1.0, "n_f": 65, "a": 8, "delta": 0.35,
        "packet": {"k0": std::f64::consts::FRAC_PI_2 + 0.1, "sigma_k": 0.05, "branch": "right"},
        "grid": {"t_min": 0.0, "t_max": 8.0, "steps": 80}
    });
    let run = qst(dir.path(), "ring", &config, &["--out", out.to_str().unwrap()]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let result = stdout_json(&run);
    let peak = result["outputs"]["peak_time"].as_f64().unwrap();
    assert!((peak - 4.0).abs() <= 0.1 + 1e-12);
    assert!(result["outputs"]["fidelity_at_tau"].as_f64().unwrap() > 0.99);

    let run = qst(
        dir.path(),
        "effective",
        &config,
        &["--out", dir.path().join("eff.csv").to_str().unwrap()],
    );
    assert_eq!(run.status.code(), Some(0));
    let report = &stdout_json(&run)["outputs"]["report"];
    assert!(report["model_agreement"].as_f64().unwrap() >= 0.99);
    let csv = std::fs::read_to_string(dir.path().join("eff.csv")).unwrap();
    assert!(csv.starts_with("t,exact,effective\n"));

    // open shell and leaking packets are configuration errors
    let mut open = config.clone();
    open["n_f"] = json!(64);
    assert_eq!(qst(dir.path(), "ring", &open, &[]).status.code(), Some(2));
    let mut wide = config.clone();
    wide["packet"]["sigma_k"] = json!(0.4);
    assert_eq!(qst(dir.path(), "ring", &wide, &[]).status.code(), Some(2));
}

#[test]
fn resource_limit_is_exit_two() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "lattice": {"axes": [{"N": 20, "m": 0}, {"N": 20, "m": 0}, {"N": 20, "m": 0}]},
        "initial": {"site": [1, 1, 1]},
        "grid": {"t_min": 0.0, "t_max": 1.0, "steps": 2}
    });
    let run = qst(dir.path(), "mirror", &config, &[]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("exceeds"));
}

#[test]
fn identical_seeds_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "lattice": {"axes": [{"N": 6, "m": 1}, {"N": 3, "m": 0}]},
        "initial": {"random_slater": {"particles": 3}},
        "grid": {"t_min": 0.0, "t_max": 2.0, "steps": 20}
    });
    let mut outputs = Vec::new();
    for (name, seed) in [("a", "7"), ("b", "7"), ("c", "8")] {
        let csv = dir.path().join(format!("{name}.csv"));
        let run = qst(
            dir.path(),
            "mirror",
            &config,
            &["--out", csv.to_str().unwrap(), "--seed", seed],
        );
        assert_eq!(run.status.code(), Some(0));
        assert_eq!(stdout_json(&run)["seed"], json!(seed.parse::<u64>().unwrap()));
        outputs.push((
            std::fs::read(&csv).unwrap(),
            std::fs::read(dir.path().join(format!("{name}.json"))).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0].0, outputs[2].0);
}

#[test]
fn missing_output_directory_is_exit_two() {
    let dir = TempDir::new().unwrap();
    let run = qst(
        dir.path(),
        "engineer",
        &json!({"N": 4, "m": 0}),
        &["--out", dir.path().join("missing/profile.json").to_str().unwrap()],
    );
    assert_eq!(run.status.code(), Some(2));
}
