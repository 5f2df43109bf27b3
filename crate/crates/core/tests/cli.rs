//! The `fsl` binary end to end: exit codes, written files, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fsl_core::constructions::{frame_operator, hom_frame, tensor};
use fsl_core::format::{read_structure, Structure};
use fsl_core::table::TableArtifact;
use fsl_core::worked::{diamond_swap, three_node_frame, two};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn fsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args(args)
        .env_remove("FSL_CARRIER_CAP")
        .output()
        .expect("fsl runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("UTF-8 output")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("UTF-8 path")
}

#[test]
fn validate_accepts_and_rejects_with_locations() {
    let ok = fsl(&["validate", path(&data("diamond_swap.json"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("valid fss with 5 elements"));

    let cycle = fsl(&["validate", path(&data("cycle.json"))]);
    assert_eq!(cycle.status.code(), Some(2));
    assert!(stderr(&cycle).contains("leq:"), "{}", stderr(&cycle));
    assert!(stderr(&cycle).contains("antisymmetric"));

    let broken = fsl(&["validate", path(&data("square_breaking_joins.json"))]);
    assert_eq!(broken.status.code(), Some(2));
    let msg = stderr(&broken);
    assert!(msg.contains("F:") && msg.contains("`p` and `q`"), "{msg}");

    let missing = fsl(&["validate", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn validate_reports_syntax_positions() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, "{\"kind\": \"frame\",\n  \"nodes\": [\"i\"\n}").unwrap();
    let o = fsl(&["validate", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn compute_tensor_writes_a_revalidating_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsl(&[
        "compute",
        "tensor",
        path(&data("diamond_swap.json")),
        path(&data("three_node_frame.json")),
        "-o",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = read_structure(&dir.path().join("tensor.json")).unwrap();
    let expected = tensor(&three_node_frame(), &diamond_swap()).unwrap();
    assert_eq!(written, Structure::Lattice(expected.lattice().clone()));
    assert_eq!(expected.len(), 15);
    let table = TableArtifact::parse(&fs::read_to_string(dir.path().join("tensor.txt")).unwrap()).unwrap();
    assert_eq!(table.table("J⊗H").unwrap().rows.len(), 15);
}

#[test]
fn compute_power_reproduces_the_operator_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsl(&[
        "compute",
        "power",
        path(&data("two.json")),
        path(&data("three_node_frame.json")),
        "-o",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = read_structure(&dir.path().join("power.json")).unwrap();
    let expected = frame_operator(&two(), &three_node_frame()).unwrap();
    assert_eq!(written, Structure::Fss(expected.fss().clone()));
    let tables = TableArtifact::parse(&fs::read_to_string(dir.path().join("power.txt")).unwrap()).unwrap();
    let t = tables.table("L^J").unwrap();
    assert_eq!(t.rows.len(), 8);
    // (1,0,0) is sent to (0,1,0) and back.
    assert_eq!(t.cell("(1,0,0)", "F^J"), Some("(0,1,0)"));
    assert_eq!(t.cell("(0,1,0)", "F^J"), Some("(1,0,0)"));
    assert_eq!(t.cell("(0,0,1)", "F^J"), Some("(0,0,1)"));
}

#[test]
fn compute_homframe_on_the_diamond() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsl(&[
        "compute",
        "homframe",
        path(&data("two.json")),
        path(&data("diamond_swap.json")),
        "-o",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = read_structure(&dir.path().join("homframe.json")).unwrap();
    let expected = hom_frame(&diamond_swap(), &two()).unwrap();
    assert_eq!(written, Structure::Frame(expected.frame().clone()));
    // Five maps preserve joins; twelve pairs are related.
    let Structure::Frame(j) = written else { unreachable!() };
    assert_eq!((j.len(), j.rel().len()), (5, 12));
}

#[test]
fn compute_is_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let o = fsl(&[
            "compute",
            "tensor",
            path(&data("three_node_frame.json")),
            path(&data("diamond_swap.json")),
            "-o",
            path(dir.path()),
        ]);
        assert_eq!(o.status.code(), Some(0));
        (
            fs::read(dir.path().join("tensor.json")).unwrap(),
            fs::read(dir.path().join("tensor.txt")).unwrap(),
        )
    };
    assert_eq!(run(), run());
}

#[test]
fn compute_needs_the_right_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsl(&["compute", "tensor", path(&data("two.json")), "-o", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tensor needs a frame file"));
}

#[test]
fn carrier_cap_is_reported_as_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args([
            "compute",
            "power",
            path(&data("three_node_frame.json")),
            path(&data("two.json")),
            "-o",
            path(dir.path()),
        ])
        .env("FSL_CARRIER_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"), "{}", stderr(&o));
}

#[test]
fn check_adjunctions_on_the_worked_inputs() {
    let files = [data("three_node_frame.json"), data("diamond_swap.json"), data("two.json")];
    let files: Vec<&str> = files.iter().map(|p| path(p)).collect();
    for which in ["I", "II", "III"] {
        let mut args = vec!["check", which];
        args.extend(&files);
        let o = fsl(&args);
        assert_eq!(o.status.code(), Some(0), "{which}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("PASS\n"));
    }
}

#[test]
fn check_on_singleton_defaults() {
    let o = fsl(&["check", "I"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("one-element defaults: J, L, H"));
}

#[test]
fn check_laws_and_replay() {
    let o = fsl(&["check", "laws", "--random", "7", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("adjunction laws: 10 instances from seed 7"), "{text}");
    assert!(text.contains("0 failing"));

    let a = fsl(&["check", "laws", "--replay", "12345"]);
    let b = fsl(&["check", "laws", "--replay", "12345"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let neither = fsl(&["check", "laws"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn examples_report_golden_comparisons() {
    let two = fsl(&["example", "2"]);
    assert_eq!(two.status.code(), Some(0));
    assert!(stdout(&two).ends_with("golden: identical\n"));

    // The stated tables for the first and third examples contain entries
    // that contradict the definitions; the differences are listed per cell.
    let one = fsl(&["example", "1"]);
    assert_eq!(one.status.code(), Some(1));
    assert!(stdout(&one).contains("homs: row f2 missing from the computed output"));
    let three = fsl(&["example", "3"]);
    assert_eq!(three.status.code(), Some(1));
    assert!(stdout(&three).contains("η[η(b)][f2]: expected [(c,b,0)], computed [(b,c,0)]"));
    assert_eq!(fsl(&["example", "3"]).stdout, three.stdout);

    assert_eq!(fsl(&["example", "4"]).status.code(), Some(2));
}
