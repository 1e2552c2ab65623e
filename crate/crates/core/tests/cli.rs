use std::path::Path;
use std::process::{Command, Output};

fn cbe(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbe"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env_remove("CBE_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn block(dump: &str, k: usize) -> String {
    let header = format!("# f_{k}");
    dump.split("\n\n")
        .find(|b| b.lines().next() == Some(header.as_str()))
        .map(|b| b.lines().skip(1).map(|l| format!("{l}\n")).collect())
        .unwrap_or_default()
}

#[test]
fn example1_second_component_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbe(dir.path(), &["run", "--case", "example1", "--order", "10"]);
    assert!(out.status.success());
    let golden = include_str!("golden/example1_vim_f2.txt");
    assert_eq!(block(&read(dir.path(), "series_vim.txt"), 2), golden);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| cbe(dir.path(), args).status.code();
    assert_eq!(code(&["run", "--order", "-1"]), Some(2));
    assert_eq!(code(&["run", "--case", "example9"]), Some(2));
    assert_eq!(code(&["table", "--case", "example2"]), Some(4));
    assert_eq!(code(&["table", "--times"]), Some(2));
    assert_eq!(code(&["run", "--case", "example1", "--order", "2"]), Some(0));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn manifest_tracks_content() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    for (dir, order) in [(&a, "4"), (&b, "4"), (&c, "5")] {
        assert!(cbe(dir.path(), &["run", "--case", "example2", "--order", order]).status.success());
    }
    let manifest = |d: &tempfile::TempDir| -> serde_json::Value {
        serde_json::from_str(&read(d.path(), "manifest.json")).unwrap()
    };
    let sha = |d: &tempfile::TempDir| manifest(d)["runs"][0]["sha256"].as_str().unwrap().to_owned();
    assert_eq!(sha(&a), sha(&b));
    assert_ne!(sha(&a), sha(&c));
    assert_eq!(manifest(&c)["runs"][0]["order"], 5);
    assert_eq!(sha(&a), cbe_core::cli::sha256_hex(read(a.path(), "series_vim.txt").as_bytes()));
}

#[test]
fn output_dir_from_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_cbe"))
        .args(["run", "--case", "example1", "--order", "2"])
        .env("CBE_OUTPUT_DIR", env_dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(env_dir.path().join("series_vim.txt").exists());

    // the flag wins over the environment
    let status = Command::new(env!("CARGO_BIN_EXE_cbe"))
        .args(["run", "--case", "example1", "--order", "2", "--output-dir"])
        .arg(flag_dir.path())
        .env("CBE_OUTPUT_DIR", env_dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(flag_dir.path().join("manifest.json").exists());
}

#[test]
fn table_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbe(dir.path(), &["table", "--times", "0.1", "--orders", "4,6"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "table.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0.1,vim,4,"));
    assert!(lines[4].starts_with("0.1,odm,6,"));
    let err: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((err - 1.8076e-6).abs() / 1.8076e-6 < 5e-3);
}

#[test]
fn converge_and_bound_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cbe(dir.path(), &["converge", "--case", "example2", "--time", "1.5"]).status.success());
    let gamma = read(dir.path(), "gamma.csv");
    assert_eq!(gamma.lines().count(), 6);
    for line in gamma.lines().skip(1) {
        let g: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(g > 0.0 && g < 1.0, "{line}");
    }
    assert!(cbe(dir.path(), &["bound"]).status.success());
    assert_eq!(read(dir.path(), "bound.csv").lines().count(), 10);
}

#[test]
fn moments_leave_unknown_exact_values_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbe(dir.path(), &["moments", "--case", "example2", "--j", "2", "--times", "0.5", "--method", "vim"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "moments.csv");
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(','), "{row}");
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbe(dir.path(), &["verify", "--case", "example1", "--samples", "4"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "verify.csv");
    assert!(csv.starts_with("check,value,tol,passed\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}
