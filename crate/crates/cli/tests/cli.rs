use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxtile")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn reports_are_byte_stable_across_runs_and_thread_counts() {
    for spec in ["fibonacci.spec", "thue-morse.spec"] {
        let a = run(&["prox", &data(spec), "--jobs", "1"]);
        let b = run(&["prox", &data(spec), "--jobs", "4"]);
        let c = run(&["prox", &data(spec)]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
    }
}

#[test]
fn artifacts_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = |sub: &str| -> PathBuf { dir.path().join(sub) };
    let o = run(&["analyze", &data("fibonacci.spec"), "--out", out("a").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for f in ["report.txt", "points.csv", "patch.svg", "certificates/perron.txt"] {
        assert!(out("a").join(f).exists(), "{}", f);
    }
    assert!(std::fs::read_to_string(out("a/patch.svg")).unwrap().starts_with("<svg"));
    let o = run(&["prox", &data("thue-morse.spec"), "--out", out("p").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(out("p/graph.txt")).unwrap().starts_with("digraph"));
    let certs: Vec<_> = std::fs::read_dir(out("p/certificates")).unwrap().collect();
    assert!(certs.len() >= 6);
    let report = std::fs::read_to_string(out("p/report.txt")).unwrap();
    assert_eq!(report.as_bytes(), o.stdout.as_slice());
    let o = run(&["modelset", &data("fibonacci.cps"), "--out", out("m").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(out("m/points.csv")).unwrap().lines().count() > 100);
}

#[test]
fn spectrum_reports_the_lattice() {
    let o = run(&["spectrum", &data("fibonacci.spec")]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("star = [[0, 1], [1, 1]]"));
    assert!(
        s.lines()
            .filter(|l| l.starts_with("eigen_test") && l.contains("pass = true"))
            .count()
            == 2
    );
}

#[test]
fn singular_shift_has_two_model_sets() {
    let o = run(&["modelset", &data("fibonacci.cps"), "--shift", "0 ; -1"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("singular = true") && s.contains("fiber_size = 2"), "{}", s);
}

#[test]
fn crosscheck_mismatch_reports_first_discrepancy() {
    let o = run(&["crosscheck", &data("fibonacci.spec"), &data("fibonacci-wide.cps")]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("first_discrepancy = ") && s.contains("match = false"));
    let o = run(&["crosscheck", &data("fibonacci.spec"), &data("fibonacci.cps"), "--radius", "0"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("match = true"));
}

#[test]
fn input_errors_exit_two() {
    let malformed = run(&["analyze", &data("invalid/malformed.spec")]);
    assert_eq!(code(&malformed), 2);
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line"));
    assert_eq!(code(&run(&["prox", &data("fibonacci.spec"), "--tolerance", "1.5"])), 2);
    assert_eq!(code(&run(&["prox", &data("fibonacci.spec"), "--node-budget", "0"])), 2);
    assert_eq!(code(&run(&["prox", &data("fibonacci.spec"), "--radius", "-3"])), 2);
    assert_eq!(code(&run(&["analyze", "/nonexistent/file.spec"])), 2);
    assert_eq!(code(&run(&["crosscheck", &data("thue-morse.spec"), &data("fibonacci.cps")])), 2);
}

#[test]
fn oversized_model_set_region_exits_three() {
    let o = run(&["modelset", &data("fibonacci.cps"), "--radius", "10000000"]);
    assert_eq!(code(&o), 3);
}
