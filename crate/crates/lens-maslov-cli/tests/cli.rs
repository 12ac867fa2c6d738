//! End-to-end runs of the compiled binary: exit codes, report files on
//! disk, config-file precedence, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lens-maslov"))
        .args(args)
        .args(["--out-dir", dir.to_str().unwrap()])
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(format!("{name}.txt"))).expect("report written")
}

#[test]
fn reeb_mu_writes_a_report_and_reruns_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reeb-mu", "--k", "3", "--n", "2", "--l", "1"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let first = report(dir.path(), "reeb-mu");
    assert!(first.contains("mu = 4"), "report:\n{first}");
    assert!(first.contains("version = "), "report:\n{first}");
    assert!(first.contains("config.k = 3"), "report:\n{first}");

    let again = tempfile::tempdir().unwrap();
    let out = run(&["reeb-mu", "--k", "3", "--n", "2", "--l", "1"], again.path());
    assert!(out.status.success());
    assert_eq!(first, report(again.path(), "reeb-mu"), "reruns must be byte-identical");
}

#[test]
fn the_standard_loop_reports_nu_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["linear-maslov", "--standard-loop", "--n", "1"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = report(dir.path(), "linear-maslov");
    assert!(text.contains("nu = 2"), "report:\n{text}");
}

#[test]
fn usage_problems_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();

    // A flag value the computation cannot accept.
    let out = run(&["reeb-mu", "--l", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    // A flag clap itself rejects.
    let out = run(&["reeb-mu", "--no-such-flag"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // Conflicting model sources.
    let out = run(&["equivtop-homology", "--k", "3", "--file", "nowhere.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(run(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn config_file_values_override_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "l = 2\n").unwrap();
    let out = run(
        &["reeb-mu", "--k", "3", "--n", "2", "--l", "1", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = report(dir.path(), "reeb-mu");
    assert!(text.contains("config.l = 2"), "report:\n{text}");
    assert!(text.contains("mu = 8"), "report:\n{text}");
}

#[test]
fn a_bad_thread_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lens-maslov"))
        .args(["reeb-mu", "--out-dir", dir.path().to_str().unwrap()])
        .env("LENS_MASLOV_THREADS", "0")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LENS_MASLOV_THREADS"));
}
