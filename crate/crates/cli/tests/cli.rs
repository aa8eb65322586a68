//! Golden-output tests for every subcommand on the pentagon instance.
//! Set `CIRCLECOLOR_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn c5() -> String {
    golden_dir().join("c5.txt").display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlecolor"))
        .args(args)
        .env_remove("CIRCLECOLOR_TOL")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("CIRCLECOLOR_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn solve_prints_pentagon_values() {
    let out = stdout_ok(&["solve", &c5()]);
    assert!(out.starts_with("chi=3 chi_f=2.5\n"));
    check_golden("solve.txt", &out);
    check_golden("solve.json", &stdout_ok(&["--json", "--no-timing", "solve", &c5()]));
}

#[test]
fn solve_with_other_formulations() {
    check_golden("solve_cl.txt", &stdout_ok(&["solve", &c5(), "--formulation", "cl"]));
    check_golden("solve_as.txt", &stdout_ok(&["solve", &c5(), "--formulation", "as"]));
    check_golden(
        "solve_cgh.txt",
        &stdout_ok(&["solve", &c5(), "--formulation", "cgh", "--height", "2"]),
    );
    check_golden("solve_relax.txt", &stdout_ok(&["solve", &c5(), "--relax"]));
}

#[test]
fn certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c5.cert");
    stdout_ok(&["solve", &c5(), "--certificate", cert.to_str().unwrap()]);
    check_golden("c5.cert", &fs::read_to_string(cert).unwrap());
}

#[test]
fn relax_golden() {
    check_golden("relax.txt", &stdout_ok(&["relax", &c5()]));
}

#[test]
fn mwis_golden() {
    check_golden("mwis.txt", &stdout_ok(&["mwis", &c5()]));
    check_golden("mwis_weighted.json", &stdout_ok(&["--json", "mwis", &c5(), "--weights=-1,2,3,0,5"]));
}

#[test]
fn stacks_golden() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.txt");
    check_golden(
        "stacks.txt",
        &stdout_ok(&["stacks", &c5(), "--height", "1", "--plan", plan.to_str().unwrap()]),
    );
    assert_eq!(fs::read_to_string(plan).unwrap(), "1 3\n5\n2 4\n");
    check_golden("stacks.json", &stdout_ok(&["--json", "--no-timing", "stacks", &c5(), "-H", "3"]));
}

#[test]
fn gen_golden() {
    assert_eq!(stdout_ok(&["gen", "-n", "1", "--seed", "7"]), "[1,2]\n");
    check_golden("gen.txt", &stdout_ok(&["gen", "-n", "5", "--seed", "7", "--count", "3"]));
    let dir = tempfile::tempdir().unwrap();
    stdout_ok(&["gen", "-n", "5", "--seed", "7", "--count", "2", "--out-dir", dir.path().to_str().unwrap()]);
    let first = dir.path().join("instance_0.txt");
    assert!(stdout_ok(&["solve", first.to_str().unwrap()]).starts_with("chi="));
}

#[test]
fn export_golden() {
    check_golden("c5_cg.lp", &stdout_ok(&["export", &c5(), "--format", "lp"]));
    check_golden("c5_cg.mps", &stdout_ok(&["export", &c5(), "--format", "mps"]));
    check_golden("c5.dimacs", &stdout_ok(&["export", &c5(), "--format", "dimacs"]));
    check_golden(
        "c5_cgh.lp",
        &stdout_ok(&["export", &c5(), "--formulation", "cgh", "--height", "2", "--relax"]),
    );
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("c5.json");
    let out = dir.path().join("c5.lp");
    stdout_ok(&[
        "export",
        &c5(),
        "-o",
        out.to_str().unwrap(),
        "--metadata",
        meta.to_str().unwrap(),
    ]);
    assert_eq!(fs::read_to_string(out).unwrap(), fs::read_to_string(golden_dir().join("c5_cg.lp")).unwrap());
    check_golden("c5_cg.json", &fs::read_to_string(meta).unwrap());
}

#[test]
fn export_matches_library_golden() {
    let core = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    for name in ["c5_cg.lp", "c5_cg.mps"] {
        assert_eq!(
            fs::read_to_string(golden_dir().join(name)).unwrap(),
            fs::read_to_string(core.join(name)).unwrap()
        );
    }
}

#[test]
fn bench_golden() {
    let args = ["--no-timing", "bench", "-n", "5,8", "--samples", "20", "--seed", "3"];
    let csv = stdout_ok(&args);
    assert!(csv.starts_with("|V|,|E|,Ours [s],# ω = χ,# χ_f = χ,max. χ − χ_f\n"));
    check_golden("bench.csv", &csv);
    let single = stdout_ok(&["--no-timing", "bench", "-n", "5,8", "--samples", "20", "--seed", "3", "--threads", "1"]);
    assert_eq!(single, csv);
}

#[test]
fn verify_golden() {
    check_golden("verify.txt", &stdout_ok(&["verify", "--n-max", "10", "--trials", "50", "--seed", "1"]));
}

#[test]
fn json_is_reproducible() {
    for args in [
        vec!["--json", "--no-timing", "solve", "C5"],
        vec!["--json", "--no-timing", "stacks", "C5", "--height", "2"],
        vec!["--json", "--no-timing", "bench", "-n", "6", "--samples", "10"],
        vec!["--json", "gen", "-n", "6", "--seed", "11", "--count", "4"],
    ] {
        let path = c5();
        let args: Vec<&str> = args.iter().map(|a| if *a == "C5" { path.as_str() } else { a }).collect();
        let a = stdout_ok(&args);
        assert!(a.contains("\"schema_version\": 1"));
        assert!(!a.contains("timings"));
        assert_eq!(a, stdout_ok(&args));
    }
    assert!(stdout_ok(&["--json", "solve", &c5()]).contains("\"timings\""));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["solve", &c5(), "--height", "2"]).status.code(), Some(1));
    assert_eq!(run(&["solve", &c5(), "--formulation", "cgh"]).status.code(), Some(1));
    assert_eq!(run(&["--tol", "-1", "solve", &c5()]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--n-max", "40", "--trials", "1"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "/nonexistent/instance.txt"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n1 2\n2 3\n").unwrap();
    let out = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let branching = golden_dir().join("branching.txt");
    let out = run(&["--node-limit", "1", "solve", branching.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(run(&["solve", branching.to_str().unwrap()]).status.success());
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_circlecolor"))
        .args(["solve", &c5()])
        .env("CIRCLECOLOR_TOL", "1e-7")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("chi=3 chi_f=2.5"));
    let bad = Command::new(env!("CARGO_BIN_EXE_circlecolor"))
        .args(["solve", &c5()])
        .env("CIRCLECOLOR_TOL", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_circlecolor"))
        .args(["relax", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(fs::read_to_string(c5()).unwrap().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "chi_f=2.5 omega=2\n");
}
