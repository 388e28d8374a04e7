use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BASE: &str = "[problem]\np = 1.5\nq = 2.0\nlambda = 100.0\n\n[reaction]\nbeta = 0.5\n\n[grid]\nn = 256\n";

fn dphase(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_dphase"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_writes_profile_and_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let o = dphase(dir.path(), BASE, &["solve"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let csv = fs::read_to_string(out.join("solution_1e2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 257);
    assert!(csv.starts_with("x,u,Du,dist,ratio"));
    let echo = fs::read_to_string(out.join("config.toml")).unwrap();
    let again = dphase::cli::parse_config_str(&echo).unwrap();
    assert_eq!(again.n, 256);
    assert!(out.join("summary.txt").exists());
}

#[test]
fn sweep_has_one_row_per_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{BASE}\n[sweep]\nlambdas = [1e2, 1e3, 1e4]\n");
    let o = dphase(dir.path(), &config, &["sweep", "--emit-plots"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(dphase::cli::SWEEP_HEADER));
    assert_eq!(lines.count(), 3);
    assert!(out.join("exponent.gp").exists());
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = dphase(dir.path(), &BASE.replace("beta", "betta"), &["solve"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("run.toml:7:") && msg.contains("betta"), "{msg}");
}

#[test]
fn invalid_exponents_are_rejected_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = dphase(dir.path(), &BASE.replace("q = 2.0", "q = 1.2"), &["solve"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn exhausted_solver_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{BASE}\n[solver]\nmax_iter = 1\n");
    let o = dphase(dir.path(), &config, &["solve"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unwritable_output_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("out"), "a file, not a directory").unwrap();
    let o = dphase(dir.path(), BASE, &["solve"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn seed_override_changes_nothing_for_deterministic_solves() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    dphase(a.path(), BASE, &["solve", "--seed", "1"]);
    dphase(b.path(), BASE, &["solve", "--seed", "2"]);
    let read = |d: &Path| fs::read(d.join("out/solution_1e2.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}
