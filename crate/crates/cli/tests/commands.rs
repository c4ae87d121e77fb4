use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quiver-regrade"));
    c.env_remove("QUIVER_REGRADE_PRIME");
    c
}

fn run(args: &[&str]) -> Output {
    cli().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_accepts_and_rejects() {
    let ok = run(&["validate", golden("kxy.quiver").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "ok: 1 vertices, 2 arrows, 1 relations\n");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.quiver", "[quiver]\nvertex v\narrow x v w 0\n");
    let out = run(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("bad.quiver:3:7: arrow `x` has dangling endpoint `w`"), "{err}");
    assert!(err.contains("nonpositive degree 0"), "{err}");
}

#[test]
fn undeclared_names_are_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "q.quiver", "[quiver]\nvertex v\narrow x v v 1\n[relations]\nx*q\n");
    let out = run(&["validate", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("q.quiver:5:3: undeclared name `q`"), "{}", stderr(&out));
}

#[test]
fn discrepancy_of_degree_one_quiver_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "flat.quiver", "[quiver]\nvertex v\narrow x v v 1\narrow y v v 1\n[relations]\nx*y - y*x\n");
    assert_eq!(stdout(&run(&["discrepancy", &f])), "0\n");
    assert_eq!(stdout(&run(&["discrepancy", golden("two_vertex_b3.quiver").to_str().unwrap()])), "2\n");
}

#[test]
fn regrade_output_reparses_with_no_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        &dir,
        "w.quiver",
        "[quiver]\nvertex v\narrow w v v 3\narrow x v v 1\n[relations]\nw*x - x*w\n",
    );
    let out = run(&["regrade", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# regraded in 2 splits\n"), "{text}");
    let again = write(&dir, "again.quiver", &text);
    assert_eq!(stdout(&run(&["discrepancy", &again])), "0\n");
    assert!(text.contains("w'*w'''*w''''*x"), "{text}");
}

#[test]
fn split_rejects_degree_one_and_unknown_arrows() {
    let f = golden("two_vertex_b2.quiver");
    let out = run(&["split", f.to_str().unwrap(), "--arrow", "a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("degree 1"));
    let out = run(&["split", f.to_str().unwrap(), "--arrow", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown arrow `nope`"));
}

#[test]
fn usage_errors_exit_two() {
    let f = golden("kxy.quiver");
    let f = f.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["split", f],
        vec!["verify", f, "--window", "5:1"],
        vec!["verify", f, "--trials", "0"],
        vec!["verify", f, "--suite", "everything"],
        vec!["hilbert", f, "--max-degree", "13"],
        vec!["hilbert", f, "--max-degree", "3", "--field", "p4"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn hilbert_options() {
    let f = golden("kxy.quiver");
    let f = f.to_str().unwrap();
    let out = run(&["hilbert", f, "--max-degree", "13", "--degree-limit", "13", "--field", "q"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("13 7\n"));

    let regraded = tempfile::tempdir().unwrap();
    let r = regraded.path().join("r.quiver");
    run(&["regrade", f, "-o", r.to_str().unwrap()]);
    let out = run(&["hilbert", r.to_str().unwrap(), "--max-degree", "3", "--vertex", "z", "--field", "q"]);
    assert_eq!(stdout(&out), "# degree dim e_z(kQ/I)_d over q\n0 1\n1 1\n2 2\n3 3\n");

    let out = run(&["hilbert", f, "--max-degree", "10", "--path-limit", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("above --path-limit 5"));
}

#[test]
fn prime_can_be_overridden_by_environment() {
    let f = golden("kxy.quiver");
    let out = cli()
        .args(["hilbert", f.to_str().unwrap(), "--max-degree", "1"])
        .env("QUIVER_REGRADE_PRIME", "101")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("# degree dim (kQ/I)_d over p101\n"));
    let out = cli()
        .args(["hilbert", f.to_str().unwrap(), "--max-degree", "1"])
        .env("QUIVER_REGRADE_PRIME", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_has_stable_keys() {
    let f = golden("two_vertex_b3.quiver");
    let out = run(&["verify", f.to_str().unwrap(), "--suite", "split", "--trials", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let p = &v["suites"][0]["properties"][0];
    for key in ["property", "trials", "failures", "first_counterexample"] {
        assert!(p.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["suites"][0]["seed"], 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_over_rationals_on_a_two_step_file() {
    let f = golden("two_vertex_b3.quiver");
    let out = run(&[
        "verify",
        f.to_str().unwrap(),
        "--trials",
        "12",
        "--field",
        "q",
        "--window",
        "0:6",
        "--max-dim",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("functor suite: seed 0, 12 trials, window 0:6, max-dim 2, field q"));
}
