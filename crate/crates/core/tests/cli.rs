use std::path::Path;
use std::process::{Command, Output};

use glass2fock::embedding::FermionIntegrals;
use glass2fock::ising::SpinGlass;

const INSTANCE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/exJ.json");

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glass2fock"))
        .args(args)
        .env("GLASS2FOCK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_of_the_reference_instance() {
    let o = cli(&["spectrum", INSTANCE]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-10 -6 -2 2 6");
}

#[test]
fn verify_single_bond_momentum_pair() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bond.json");
    SpinGlass::from_couplings(2, [(0, 1, 1)])
        .unwrap()
        .save(&inst)
        .unwrap();
    let o = cli(&["verify", path(&inst), "--construction", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = report.as_object().unwrap();
    assert!(checks.len() >= 8);
    assert!(checks.values().all(|c| c["pass"] == true));
}

#[test]
fn embed_without_gadget_warns_on_magnetized_ground() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fi.json");
    let o = cli(&[
        "embed",
        INSTANCE,
        "--construction",
        "2",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(FermionIntegrals::load(&out).unwrap().num_modes(), 6);

    let o = cli(&[
        "embed",
        INSTANCE,
        "--construction",
        "2",
        "--gadget",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(FermionIntegrals::load(&out).unwrap().num_modes(), 12);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    for sub in [
        "gen",
        "gadget",
        "embed",
        "scf",
        "histogram",
        "trace",
        "verify",
        "spectrum",
    ] {
        assert_eq!(cli(&[sub, "--help"]).status.code(), Some(0), "{sub}");
    }
    assert_eq!(cli(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        cli(&["spectrum", INSTANCE, "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        cli(&["spectrum", "/nonexistent/instance.json"])
            .status
            .code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"num_spins": 2, "couplings": [[1, 3, 1]]}"#).unwrap();
    assert_eq!(cli(&["spectrum", path(&bad)]).status.code(), Some(1));
    std::fs::write(&bad, r#"{"num_spins": 2, "couplings": [], "extra": 1}"#).unwrap();
    assert_eq!(cli(&["spectrum", path(&bad)]).status.code(), Some(1));
}

#[test]
fn pipeline_is_a_pure_function_of_its_seeds() {
    let run = |dir: &Path| {
        let glass = dir.join("glass.json");
        let doubled = dir.join("doubled.json");
        let fi = dir.join("fi.json");
        assert!(
            cli(&["gen", "--size", "1", "--seed", "4", "--out", path(&glass)])
                .status
                .success()
        );
        assert!(cli(&["gadget", path(&glass), "--out", path(&doubled)])
            .status
            .success());
        assert!(cli(&[
            "embed",
            path(&doubled),
            "--construction",
            "2",
            "--out",
            path(&fi)
        ])
        .status
        .success());
        let o = cli(&[
            "histogram",
            path(&glass),
            "--runs",
            "20",
            "--base-seed",
            "9",
            "--out-dir",
            path(dir),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        [
            glass,
            doubled,
            fi,
            dir.join("histogram.csv"),
            dir.join("summary.json"),
        ]
        .map(|p| std::fs::read(p).unwrap())
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(a.path()), run(b.path()));
}

#[test]
fn trace_writes_diagnostic_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&[
        "trace",
        INSTANCE,
        "--seed",
        "0",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("trace_0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iter,energy,delta_p_norm,shift_norm,commutator_norm"
    );
    assert!(lines.next().unwrap().starts_with("0,"));
    assert!(lines.count() >= 1);
}

#[test]
fn scf_reports_one_run() {
    let o = cli(&["scf", INSTANCE, "--seed", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 3);
    assert!(v["excitation_energy"].as_f64().unwrap() > -1e-6);
}
