use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn chansim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chansim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let good = configs().join("amplitude_damping.json");
    let o = chansim(&["validate", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS"));

    let dir = tempfile::tempdir().unwrap();
    let broken = write(
        dir.path(),
        "broken.json",
        r#"{"dim": 2, "kraus": [[[[0.7071067811865476, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.7071067811865476, 0.0]]]]}"#,
    );
    let o = chansim(&["validate", &broken]);
    assert_eq!(o.status.code(), Some(2));
    let line = stdout(&o);
    assert!(line.starts_with("FAIL residual="), "{line}");
    let residual: f64 = line["FAIL residual=".len()..].split_whitespace().next().unwrap().parse().unwrap();
    assert!((residual - 0.5).abs() < 1e-15);

    let o = chansim(&["validate", "/nonexistent/channel.json"]);
    assert_eq!(o.status.code(), Some(1));
    let bad_shape = write(dir.path(), "shape.json", r#"{"dim": 2, "kraus": [[[[1.0, 0.0]]]]}"#);
    assert_eq!(chansim(&["validate", &bad_shape]).status.code(), Some(1));
}

#[test]
fn sweep_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("bit_phase_flip.toml");
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "4", "4"].iter().enumerate() {
        let csv = dir.path().join(format!("run{k}.csv"));
        let o = chansim(&[
            "sweep",
            config.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 22);
    assert!(text.lines().nth(1).unwrap().contains(",sampled,8192,"));
}

#[test]
fn sweep_to_stdout_and_config_errors() {
    let o = chansim(&["sweep", configs().join("qutrit_adc.toml").to_str().unwrap(), "--csv", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = stdout(&o).lines().nth(1).unwrap().to_string();
    let c: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
    assert!((c - 2.0).abs() < 1e-10, "{first}");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        "[channel]\nname = \"bit_flip\"\n\n[sweep]\nparam = \"p\"\nvalues = [0.0, 1.5]\n",
    );
    let o = chansim(&["sweep", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));

    let unknown = write(dir.path(), "unknown.toml", "[channel]\nname = \"nope\"\n[sweep]\nvalues = [0.0]\nparam = \"p\"\n");
    assert_eq!(chansim(&["sweep", &unknown]).status.code(), Some(1));
}

#[test]
fn synth_prints_a_verified_circuit() {
    let o = chansim(&["synth", "--state", "[[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.5, 0.0]]", "--lower"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("qubits 2"));
    let summary = out.lines().last().unwrap();
    let fidelity: f64 = summary.rsplit('=').next().unwrap().parse().unwrap();
    assert!(fidelity >= 1.0 - 1e-10, "{summary}");

    assert_eq!(chansim(&["synth", "--state", "[0.6, 0.8]", "--real"]).status.code(), Some(0));
    assert_eq!(chansim(&["synth", "--state", "[1, 0, 0]"]).status.code(), Some(1));
    assert_eq!(chansim(&["synth", "--state", "not json"]).status.code(), Some(1));
}

#[test]
fn export_qasm_writes_programs() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("bit_phase_flip.toml");
    let o = chansim(&[
        "export-qasm",
        config.to_str().unwrap(),
        "--point",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["point3_prep.qasm", "point3_prep_X.qasm", "point3_prep_Y.qasm", "point3_prep_Z.qasm"]);
    let text = std::fs::read_to_string(dir.path().join("point3_prep.qasm")).unwrap();
    assert!(text.starts_with("OPENQASM 2.0;"));

    let o = chansim(&["export-qasm", config.to_str().unwrap()]);
    assert!(stdout(&o).contains("qreg q[2];"));
    let o = chansim(&["export-qasm", config.to_str().unwrap(), "--point", "99"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_reports_coherence() {
    let o = chansim(&["oracle", "--channel", "bit_phase_flip", "--param", "p=0.25"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["l1_coherence"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let o = chansim(&["oracle", "--channel", "qutrit_adc", "--param", "gamma=0", "--state", "[1, 1, 1]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["l1_coherence"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    assert_eq!(chansim(&["oracle", "--channel", "gad", "--param", "p=0.1"]).status.code(), Some(1));
    assert_eq!(chansim(&["oracle"]).status.code(), Some(1));
}

#[test]
fn usage_exit_codes() {
    assert_eq!(chansim(&["--help"]).status.code(), Some(0));
    assert_eq!(chansim(&["--version"]).status.code(), Some(0));
    assert_eq!(chansim(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(chansim(&[]).status.code(), Some(1));
}
