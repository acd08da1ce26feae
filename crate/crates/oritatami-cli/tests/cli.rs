//! End-to-end tests of the command-line interface and its exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oritatami"))
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn scts_run_prints_worked_trace() {
    let out = run(&["scts", "run", "--productions", "e,100,1,0", "--input", "010"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in [
        "<010, e>",
        "<10, 100>",
        "<01, 0>",
        "<1, e>",
        "<100, 1>",
        "<000, e>",
        "<00, 100>",
        "<0, 1>",
    ] {
        assert!(text.contains(line), "missing {line:?} in:\n{text}");
    }
    assert!(text.contains("pointer 3"));
}

#[test]
fn scts_blocks_emits_grid() {
    let out = run(&["scts", "blocks", "--productions", "e,100,1,0", "--input", "010"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("row 0 (step 0): BFB"));
    assert!(text.contains("halts with pointer 3"));
    // a production count that is not a multiple of 4 is a usage error
    let bad = run(&["scts", "blocks", "--productions", "1,0,1", "--input", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn simulate_empty_sequence_exits_zero() {
    let path = samples().join("empty.system");
    let out = run(&["simulate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("completed"));
}

#[test]
fn simulate_renders_svg() {
    let dir = std::env::temp_dir().join("oritatami-cli-test-svg");
    std::fs::create_dir_all(&dir).unwrap();
    let svg_path = dir.join("out.svg");
    let system = samples().join("forced.system");
    let out = run(&[
        "simulate",
        system.to_str().unwrap(),
        "--render",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 4);
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn check_determinism_on_glider() {
    let path = samples().join("glider.system");
    let out = run(&["check-determinism", path.to_str().unwrap(), "--horizon", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("deterministic"));
}

#[test]
fn design_rule_round_trip_and_unsat_exit() {
    let dir = std::env::temp_dir().join("oritatami-cli-test-design");
    std::fs::create_dir_all(&dir).unwrap();
    let sat_inst = dir.join("sat.inst");
    let rule_file = dir.join("sat.rule");
    let sat_cnf = samples().join("sat.cnf");

    let out = run(&[
        "reduce",
        "3sat",
        sat_cnf.to_str().unwrap(),
        "--delay",
        "1",
        "--out",
        sat_inst.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "design-rule",
        sat_inst.to_str().unwrap(),
        "--emit",
        rule_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("FEASIBLE"));

    let out = run(&[
        "decode-assignment",
        rule_file.to_str().unwrap(),
        sat_cnf.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("satisfies the formula"));

    // the unsatisfiable formula reduces to an infeasible instance
    let unsat_inst = dir.join("unsat.inst");
    let unsat_cnf = samples().join("unsat.cnf");
    let out = run(&[
        "reduce",
        "3sat",
        unsat_cnf.to_str().unwrap(),
        "--delay",
        "1",
        "--out",
        unsat_inst.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["design-rule", unsat_inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("INFEASIBLE"));
    // the brute-force oracle agrees
    let out = run(&["design-rule", unsat_inst.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn turing_geometry_spot_values() {
    let out = run(&["turing", "geometry", "--n", "4", "--L", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("width w = 90"));
    assert!(text.contains("height h = 291"));
    assert!(text.contains("module G bead budget: 254"));
    assert!(!text.contains("VIOLATED"));
    let bad = run(&["turing", "geometry", "--n", "3", "--L", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn counter_encode_and_verify() {
    let out = run(&["counter", "encode", "--value", "5", "--bits", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "S 1 . 0 . 1");

    let rows = samples().join("counter_rows.txt");
    let out = run(&["counter", "verify", rows.to_str().unwrap(), "--start", "5", "--bits", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));

    // a wrong start value fails verification
    let out = run(&["counter", "verify", rows.to_str().unwrap(), "--start", "4", "--bits", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn frontier_cap_is_resource_exit() {
    let dir = std::env::temp_dir().join("oritatami-cli-test-cap");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wide.system");
    std::fs::write(
        &path,
        "[beads]\na b\n[sequence]\nb b b b\n[rule]\n[delay]\n1\n[dynamics]\noblivious\n[seed]\n0 0 a\n",
    )
    .unwrap();
    let out = bin()
        .args(["simulate", path.to_str().unwrap()])
        .env("ORITATAMI_MAX_FRONTIER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["simulate", "/nonexistent/file.system"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}
