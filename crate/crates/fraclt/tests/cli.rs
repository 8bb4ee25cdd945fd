use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fraclt() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fraclt"));
    cmd.env_remove("FRACLT_OUTPUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    fraclt().args(args).output().expect("spawn fraclt")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing {key} in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn reports(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir.join("reports"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

const SMALL_T2: &str = r#"{
  "version": 1,
  "workers": 2,
  "jobs": [
    {
      "name": "well",
      "theorem": "T2",
      "d": 1, "s": 0.5, "p": 2.0, "tau": 0.1,
      "grid": { "n": 32, "l": 20.0 },
      "potential": { "kind": "gaussian", "amplitude": [-0.2, 0.2], "width": 1.0 }
    },
    {
      "name": "noise",
      "theorem": "T1b",
      "d": 1, "s": 1.0, "p": 2.0, "tau": [0.05, 0.1],
      "grid": { "n": 32, "l": 20.0 },
      "potential": { "kind": "random-bandlimited", "amplitude": [-0.3, 0.3], "width": 1.5 },
      "seed": 11
    }
  ]
}"#;

#[test]
fn zero_potential_has_zero_sum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version":1,"jobs":[{"name":"free","theorem":"T2","d":1,"s":0.5,"p":2.0,"tau":0.1,
            "grid":{"n":32,"l":20.0},"potential":{"kind":"gaussian","amplitude":[0.0,0.0]}}]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&["run", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&out_dir.join("reports/000-free.json"));
    assert_eq!(report["status"], "passed");
    assert_eq!(report["report"]["lhs"].as_f64().unwrap(), 0.0);
    assert_eq!(report["report"]["v_norm_pp"].as_f64().unwrap(), 0.0);
}

#[test]
fn inadmissible_job_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version":1,"jobs":[{"theorem":"T1","d":1,"s":0.25,"p":1.5,"tau":0.1,
            "grid":{"n":32,"l":20.0},"potential":{"kind":"gaussian","amplitude":[-0.2,0.2]}}]}"#,
    );
    let out = run(&["run", &cfg, "--output-dir", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error"), "{err}");
    assert!(!dir.path().join("out/manifest.json").exists());
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"version":1,"jobs":[],"color":"blue"}"#);
    let out = run(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_is_io_error() {
    let out = run(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_T2);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (target, workers) in [(&a, "1"), (&b, "3")] {
        let out = run(&["run", &cfg, "--output-dir", target.to_str().unwrap(), "--workers", workers]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let ra = reports(&a);
    assert_eq!(ra.len(), 3);
    assert_eq!(ra, reports(&b));
    let ma = read_json(&a.join("manifest.json"));
    let mb = read_json(&b.join("manifest.json"));
    assert_eq!(ma["config_hash"], mb["config_hash"]);
    assert_eq!(ma["config_hash"].as_str().unwrap().len(), 64);
    let names: Vec<_> = ma["jobs"].as_array().unwrap().iter().map(|j| j["name"].clone()).collect();
    assert_eq!(names, ["well", "noise-tau0.05", "noise-tau0.1"]);
}

#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_T2);
    let out_dir = dir.path().join("out");
    let out = run(&["run", &cfg, "--output-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for (_, bytes) in reports(&out_dir) {
        let report: fraclt::report::JobReport = serde_json::from_slice(&bytes).unwrap();
        let again = serde_json::to_value(&report).unwrap();
        assert_eq!(again, serde_json::from_slice::<Value>(&bytes).unwrap());
        let check = report.integral_check.expect("integral check");
        assert!(check.relative_error < 1e-8);
    }
    let manifest: fraclt::report::RunManifest =
        serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.exit_code, 0);
    assert_eq!(manifest.jobs.len(), 3);
}

#[test]
fn output_dir_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_T2);
    let target = dir.path().join("from-env");
    let out = fraclt()
        .args(["run", &cfg])
        .env("FRACLT_OUTPUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.join("manifest.json").exists());
}

#[test]
fn demo_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let demo = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/demo.json");
    let out = run(&["run", demo, "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read_json(&dir.path().join("manifest.json"));
    for job in manifest["jobs"].as_array().unwrap() {
        assert_eq!(job["status"], "passed");
    }
}

#[test]
fn constants_command() {
    let out = run(&["constants", "--theorem", "T2", "--d", "1", "--s", "0.5", "--p", "2", "--tau", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((field(&text, "K1") - 0.5).abs() < 1e-12);
    assert!((field(&text, "I") - 0.279290601871).abs() < 1e-10);
    assert!((field(&text, "C_omega") - 1.0).abs() < 1e-12);
}

#[test]
fn constants_json_output() {
    let out = run(&["constants", "--theorem", "T1b", "--d", "1", "--s", "1", "--p", "2", "--tau", "0.1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theorem"], "T1b");
    assert!(v["integral"].as_f64().unwrap() > 0.0);
}

#[test]
fn resolvent_command() {
    let out = run(&["resolvent", "--d", "1", "--s", "0.5", "--p", "2", "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((field(&text, "direct") - 2.0).abs() < 1e-8);
    assert!(field(&text, "bound") >= field(&text, "direct"));

    let out = run(&["resolvent", "--d", "1", "--s", "0.5", "--p", "2", "--lambda", "0,1"]);
    assert!((field(&stdout(&out), "direct") - std::f64::consts::PI).abs() < 1e-8);

    let out = run(&["resolvent", "--d", "2", "--s", "1", "--p", "2", "--lambda", "-1"]);
    assert!((field(&stdout(&out), "direct") - std::f64::consts::PI).abs() < 1e-8);
}

#[test]
fn resolvent_rejects_wrong_regime() {
    let out = run(&["resolvent", "--d", "1", "--s", "0.5", "--p", "1", "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn distortion_command() {
    let out = run(&["distortion", "--a", "10", "--samples", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("max violation = none"), "{text}");
}

#[test]
fn bgk_command() {
    let out = run(&["bgk", "--radius", "0.99", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let ratio = field(&stdout(&out), "ratio");
    assert!(ratio > 0.0 && ratio <= 2.0);
}

#[test]
fn spectrum_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let out = run(&["spectrum", "--s", "0.5", "--n", "16", "--l", "20", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers, vec!["index", "re", "im", "residual", "dist_to_ray", "class"]);
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert!(row[3].parse::<f64>().unwrap() <= 1e-8);
    }
}

#[test]
fn verify_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify", "--theorem", "T2", "--d", "1", "--s", "0.5", "--p", "2", "--tau", "0.1",
        "--n", "32", "--l", "20", "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&path);
    assert_eq!(v["verdict"], "holds");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--theorem", "T9"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
