use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use symclass::io::StateData;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symclass")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn state_file(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["state"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = run(dir, &full);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

fn load(path: &Path) -> StateData {
    StateData::from_json_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn scs_state_file() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "scs4.json", &["--builder", "scs", "--n", "4", "--theta", "1.0", "--phi", "0.5"]);
    let StateData::Pure(v) = load(&p) else { panic!("expected a pure state") };
    assert_eq!(v.amplitudes().len(), 5);
    assert!((v.norm_sqr() - 1.0).abs() < 1e-14);
}

#[test]
fn dicke_state_file() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "d42.json", &["--builder", "dicke", "--n", "4", "--k", "2"]);
    let StateData::Pure(v) = load(&p) else { panic!("expected a pure state") };
    for (k, z) in v.amplitudes().iter().enumerate() {
        assert_eq!(z.re, if k == 2 { 1.0 } else { 0.0 });
        assert_eq!(z.im, 0.0);
    }
}

#[test]
fn random_state_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    let args = ["--builder", "random", "--n", "3", "--rank", "4", "--seed", "7"];
    let a = state_file(tmp.path(), "r1.json", &args);
    let b = state_file(tmp.path(), "r2.json", &args);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn invalid_spec_names_parameter() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["state", "--builder", "scs", "--n", "4", "--theta", "1.0", "-o", "x.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--phi"));

    let out = run(tmp.path(), &["state", "--builder", "dicke", "--n", "3", "--k", "5", "-o", "x.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--k"));

    let out = run(tmp.path(), &["state", "--builder", "random", "--n", "2", "--rank", "9", "--seed", "1", "-o", "x.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--rank"));

    let out = run(tmp.path(), &["certify", "missing.json"]);
    assert_eq!(code(&out), 2);

    let out = run(tmp.path(), &["survey", "--n", "3-2", "--count", "5", "-o", "s.csv"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--n"));

    assert!(!tmp.path().join("x.json").exists());
}

#[test]
fn certify_coherent_state() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "scs4.json", &["--builder", "scs", "--n", "4", "--theta", "1.0", "--phi", "0.5"]);
    let cert = tmp.path().join("cert.json");
    let out = run(tmp.path(), &["certify", p.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(json["verdict"], "Classical");
    let atoms = json["decomposition"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0]["weight"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn certify_w_state() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "w3.json", &["--builder", "dicke", "--n", "3", "--k", "1"]);
    let cert = tmp.path().join("cert.json");
    let out = run(tmp.path(), &["certify", p.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 10);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(json["verdict"], "NonClassical");
    let conc = json["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["type"] == "Concurrence")
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((conc - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn certify_two_atom_mixture() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(
        tmp.path(),
        "mix.json",
        &["--builder", "mixture", "--n", "3", "--atom", "0.3,0.7,1.1", "--atom", "0.7,2.2,4.0"],
    );
    let cert = tmp.path().join("cert.json");
    let out = run(tmp.path(), &["certify", p.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    let mut w: Vec<f64> =
        json["decomposition"].as_array().unwrap().iter().map(|a| a["weight"].as_f64().unwrap()).collect();
    w.sort_by(f64::total_cmp);
    assert_eq!(w.len(), 2);
    assert!((w[0] - 0.3).abs() < 1e-6 && (w[1] - 0.7).abs() < 1e-6, "{w:?}");
}

#[test]
fn certify_rejects_bad_tolerance() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "g.json", &["--builder", "ghz", "--n", "3"]);
    let out = run(tmp.path(), &["certify", p.to_str().unwrap(), "--eps-sep", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--eps-sep"));
}

fn csv_column(path: &Path, column: &str) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == column).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn pfunc_maximally_mixed_is_constant() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("mm.json");
    let rho = symclass::SymDensity::maximally_mixed(3).unwrap();
    fs::write(&p, StateData::Mixed(rho).to_json_string().unwrap()).unwrap();
    let csv = tmp.path().join("mm.csv");
    let out = run(tmp.path(), &["pfunc", p.to_str().unwrap(), "-o", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "theta,phi,weight,p_value");
    let values = csv_column(&csv, "p_value");
    assert_eq!(values.len(), 8 * 16);
    for v in values {
        assert!((v.parse::<f64>().unwrap() - 0.25 / std::f64::consts::PI).abs() < 1e-12);
    }
    assert!(stdout(&out).contains("integral = 1.000000000"));
}

#[test]
fn pfunc_ghz_has_negative_minimum() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "g2.json", &["--builder", "ghz", "--n", "2"]);
    let csv = tmp.path().join("g2.csv");
    let out = run(tmp.path(), &["pfunc", p.to_str().unwrap(), "-o", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("integral = 1.000000000"));
    assert!(text.contains("not a classicality verdict"));
    let min_line = text.lines().find(|l| l.starts_with("min P = ")).unwrap();
    let value: f64 = min_line["min P = ".len()..].split_whitespace().next().unwrap().parse().unwrap();
    assert!(value < 0.0);
}

#[test]
fn pfunc_csv_uses_full_precision() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "t.json", &["--builder", "twist", "--n", "3", "--chi", "0.1"]);
    let csv = tmp.path().join("t.csv");
    assert_eq!(code(&run(tmp.path(), &["pfunc", p.to_str().unwrap(), "-o", csv.to_str().unwrap()])), 0);
    for line in fs::read_to_string(&csv).unwrap().lines().skip(1) {
        for field in line.split(',') {
            let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.len(), 18, "{field}");
        }
    }
}

#[test]
fn lambda_table() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["lambda", "--n", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("K=0   lambda = 2.50662827463"));
    let out = run(tmp.path(), &["lambda", "--n", "4", "--order", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn witnesses_report() {
    let tmp = TempDir::new().unwrap();
    let p = state_file(tmp.path(), "d.json", &["--builder", "dicke", "--n", "4", "--k", "2"]);
    let out = run(tmp.path(), &["witnesses", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("xi^2 = n/a"));
    assert!(text.contains("PPT 1|3"));
    assert!(text.contains("PPT 2|2"));
    assert!(text.contains("trace_sum = 1.000000000000"));
}

#[test]
fn survey_two_qubits() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["survey", "--n", "2", "--count", "200", "--seed", "1", "-o", "s.csv"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("consistency violations: 0"));
    assert_eq!(csv_column(&tmp.path().join("s.csv"), "verdict").len(), 200);
    assert!(csv_column(&tmp.path().join("s.csv"), "consistent").iter().all(|c| c == "true"));
    let controls = csv_column(&tmp.path().join("s_controls.csv"), "verdict");
    assert_eq!(controls.len(), 10);
    assert!(controls.iter().all(|v| v == "Classical"));
}

#[test]
fn survey_four_qubits_report() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["survey", "--n", "4", "--count", "50", "--seed", "2", "-o", "s.csv"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let sums = csv_column(&tmp.path().join("s.csv"), "trace_sum");
    assert_eq!(sums.len(), 50);
    assert!(sums.iter().all(|s| (s.parse::<f64>().unwrap() - 1.0).abs() < 1e-10));
}

#[test]
fn survey_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = run(tmp.path(), &["survey", "--n", "2-3", "--count", "20", "--seed", "9", "--controls", "4", "-o", name]);
        assert_eq!(code(&out), 0);
    }
    for (a, b) in [("a.csv", "b.csv"), ("a_controls.csv", "b_controls.csv")] {
        assert_eq!(fs::read(tmp.path().join(a)).unwrap(), fs::read(tmp.path().join(b)).unwrap());
    }
}
