use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_wearsim");

fn wearsim(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("WEARSIM_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Copies the sample config and mesh into a fresh directory, applying `edit` to the config.
fn sample(dir: &Path, edit: impl Fn(String) -> String) -> PathBuf {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    fs::copy(data.join("unit_square_8.mesh"), dir.join("unit_square_8.mesh")).unwrap();
    let cfg = edit(fs::read_to_string(data.join("coulomb.cfg")).unwrap());
    let path = dir.join("run.cfg");
    fs::write(&path, cfg).unwrap();
    path
}

#[test]
fn run_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample(dir.path(), |s| s);
    let o = wearsim(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("coulomb_out");
    let first = fs::read(out.join("diagnostics.csv")).unwrap();
    // Header plus ceil(T / dt) = 100 rows.
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 101);
    for step in [0, 25, 50, 75, 100] {
        assert!(out.join(format!("wear_{step:06}.csv")).exists());
        assert!(out.join(format!("fields_{step:06}.vtk")).exists());
    }
    let o = wearsim(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(out.join("diagnostics.csv")).unwrap(), first);
}

#[test]
fn zero_kappa_exits_with_hypothesis_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample(dir.path(), |s| s.replace("contact.kappa = 0.1", "contact.kappa = 0"));
    let o = wearsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.starts_with("error kind=hypothesis exit=3"), "{err}");
    assert!(err.contains("kappa"));
    assert!(!dir.path().join("coulomb_out").exists());
}

#[test]
fn negative_dt_and_missing_files_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample(dir.path(), |s| s.replace("solver.dt = 0.01", "solver.dt = -0.01"));
    let o = wearsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kind=config"));

    let cfg = sample(dir.path(), |s| s.replace("unit_square_8.mesh", "missing.mesh"));
    assert_eq!(wearsim(&["run", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(wearsim(&["run", "/nonexistent/run.cfg"]).status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_solver_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample(dir.path(), |s| {
        s.replace("solver.picard_max = 50", "solver.picard_max = 1")
    });
    let o = wearsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("kind=picard"));
}

#[test]
fn laws_eval_prints_value_and_parameters() {
    let o = wearsim(&[
        "laws", "eval", "p_nu", "--lam", "1", "--m", "1", "--g", "0", "--u_nu", "0.5",
    ]);
    assert_eq!(stdout(&o).trim(), "p_nu lam=1 m=1 g=0 u_nu=0.5 -> 0.5");
    let o = wearsim(&["laws", "eval", "N_l", "--l", "2", "--x", "3,4"]);
    assert_eq!(stdout(&o).trim(), "N_l l=2 x=3,4 -> 1.2,1.6");
    let o = wearsim(&[
        "laws", "eval", "h_w", "--eta", "0.01", "--mu", "0.3", "--p", "2.5", "--vt", "2",
    ]);
    assert_eq!(stdout(&o).trim(), "h_w eta=0.01 mu=0.3 p=2.5 vt=2 -> 0.015");
    let o = wearsim(&["laws", "eval", "M_l", "--l", "1", "--x", "-4"]);
    assert_eq!(stdout(&o).trim(), "M_l l=1 x=-4 -> -1");
    let o = wearsim(&["laws", "eval", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_truncation_passes() {
    let o = wearsim(&["verify", "truncation"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS truncation.N_l_lipschitz"));
    assert!(text.trim_end().ends_with("suite truncation: PASS"));
}

#[test]
fn verify_rejects_unknown_suite() {
    assert!(!wearsim(&["verify", "nothing"]).status.success());
}

#[test]
fn mesh_check_reports_summary_or_error() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/unit_square_8.mesh");
    let o = wearsim(&["mesh", "check", data.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("nodes 81"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mesh");
    fs::write(&bad, "$Dim\n2\n$Nodes\n1\n1 0 zero\n").unwrap();
    let o = wearsim(&["mesh", "check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kind=parse"), "{}", stderr(&o));
}
