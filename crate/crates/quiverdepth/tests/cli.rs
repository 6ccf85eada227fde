//! End-to-end tests of the command-line binary: flags, file inputs, output
//! formats, exit codes, and byte determinism.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quiverdepth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn depth_of_diagonal_family() {
    let out = run(&["depth", "--family", "T3", "--sub", "diagonal"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains("minimum depth: 3"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn depth_of_arrow_family_json() {
    let out = run(&[
        "depth", "--family", "T3", "--sub", "arrow", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["min_depth"], serde_json::json!(4));
    assert_eq!(v["odd_depth"], serde_json::json!(5));
    assert_eq!(v["field"], serde_json::json!("q"));
}

#[test]
fn output_is_byte_deterministic() {
    let args = [
        "depth", "--family", "T2", "--sub", "top", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "tensor-dims",
        "--family",
        "T3",
        "--sub",
        "arrow",
        "--max-n",
        "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn quiver_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.quiver");
    std::fs::write(
        &path,
        "# branched tree\nvertices 4\narrow b_4_2 4 2\narrow b_3_2 3 2\narrow b_2_1 2 1\n",
    )
    .unwrap();
    let out = run(&["depth", "--quiver", path.to_str().unwrap(), "--sub", "top"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("minimum depth: 3"));
}

#[test]
fn custom_subalgebra_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    // U_2 = J_2 inside T_2: unit plus the arrow
    writeln!(f, "1").unwrap();
    writeln!(f, "a_2_1").unwrap();
    drop(f);
    let out = run(&[
        "depth",
        "--family",
        "T2",
        "--sub",
        "custom",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("minimum depth: 4"));
}

#[test]
fn tensor_dims_table() {
    let out = run(&[
        "tensor-dims",
        "--family",
        "T2",
        "--sub",
        "top",
        "--max-n",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,dim\n0,2\n1,3\n2,4\n3,5\n4,6\n");
}

#[test]
fn prime_field_flag() {
    let out = run(&[
        "depth", "--family", "T2", "--sub", "arrow", "--field", "fp:5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("minimum depth: 4"));
    assert!(stdout(&out).contains("field: fp:5"));
}

#[test]
fn paper_suite_section_filter() {
    let out = run(&["paper-suite", "--only", "sec4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 6);
    assert!(!text.contains("FAIL"));
}

#[test]
fn explore_jordan_sweep() {
    let out = run(&[
        "explore-jordan",
        "--from",
        "2",
        "--to",
        "3",
        "--cutoff",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n,depth,resolved"));
    assert!(text.contains("2,4,true"));
    assert!(text.contains("3,5,true"));
}

#[test]
fn explore_jordan_unresolved_exit_code() {
    // cutoff 3 cannot resolve depth 4, so the sweep reports a bound
    let out = run(&[
        "explore-jordan",
        "--from",
        "2",
        "--to",
        "2",
        "--cutoff",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("2,at_least 4,false"));
}

#[test]
fn usage_and_validation_exit_codes() {
    // unknown flag: usage error
    let out = run(&["depth", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown selector: validation error
    let out = run(&["depth", "--family", "T2", "--sub", "middle"]);
    assert_eq!(out.status.code(), Some(2));
    // bad family
    let out = run(&["depth", "--family", "X9", "--sub", "top"]);
    assert_eq!(out.status.code(), Some(2));
    // missing source
    let out = run(&["depth", "--sub", "top"]);
    assert_eq!(out.status.code(), Some(2));
    // jordan needs the linear family
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.quiver");
    std::fs::write(&path, "vertices 2\narrow a 2 1\narrow b 2 1\n").unwrap();
    let out = run(&[
        "depth",
        "--quiver",
        path.to_str().unwrap(),
        "--sub",
        "jordan",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // cyclic quiver rejected with a line-level parse intact
    std::fs::write(&path, "vertices 1\narrow l 1 1\n").unwrap();
    let out = run(&["depth", "--quiver", path.to_str().unwrap(), "--sub", "top"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed quiver file reports its line
    std::fs::write(&path, "vertices 2\narrow a 5 1\n").unwrap();
    let out = run(&["depth", "--quiver", path.to_str().unwrap(), "--sub", "top"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}
