//! End-to-end tests of the bp5 binary: every subcommand, the documented
//! output lines, and the 0/1/2 exit-code contract.

use std::path::Path;
use std::process::Command;

fn bp5(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bp5"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

const AND_CIRCUIT: &str = "inputs 2\ng = AND x1 x2\noutput g\n";

#[test]
fn compile_encode_simulate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dir.path().join("and.ckt");
    let pbp = dir.path().join("and.pbp");
    let adv = dir.path().join("and.adv");
    write(&ckt, AND_CIRCUIT);

    let (code, stdout, _) = bp5(&[
        "compile",
        "--circuit",
        ckt.to_str().unwrap(),
        "--out",
        pbp.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("length=4"));
    assert!(stdout.contains("target=23451"));
    assert!(std::fs::read_to_string(&pbp)
        .unwrap()
        .starts_with("permbp n=2 len=4"));

    let (code, stdout, _) = bp5(&[
        "encode",
        "--bp",
        pbp.to_str().unwrap(),
        "--out",
        adv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("instructions=4"));

    let (code, stdout, _) = bp5(&[
        "simulate",
        "--advice",
        adv.to_str().unwrap(),
        "--input",
        "11",
        "--stats",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("accept"));
    let rest: Vec<&str> = lines.collect();
    assert!(rest.iter().any(|l| l.starts_with("steps=")));
    assert!(rest.contains(&"advice_head_moves_left=0"));
    assert!(rest.iter().any(|l| l.starts_with("register_witness=")));

    let (code, stdout, _) = bp5(&[
        "simulate",
        "--advice",
        adv.to_str().unwrap(),
        "--input",
        "01",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "reject");
}

#[test]
fn simulate_the_worked_single_instruction_tape() {
    let dir = tempfile::tempdir().unwrap();
    let adv = dir.path().join("worked.adv");
    write(&adv, "BIm2345112345ArarrrE\n");
    let (code, stdout, _) = bp5(&[
        "simulate",
        "--advice",
        adv.to_str().unwrap(),
        "--input",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "accept");
    let (code, stdout, _) = bp5(&[
        "simulate",
        "--advice",
        adv.to_str().unwrap(),
        "--input",
        "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "reject");
}

#[test]
fn eval_takes_exactly_one_source() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dir.path().join("and.ckt");
    write(&ckt, AND_CIRCUIT);

    let (code, stdout, _) = bp5(&["eval", "--circuit", ckt.to_str().unwrap(), "--input", "11"]);
    assert_eq!((code, stdout.trim()), (0, "1"));
    let (code, stdout, _) = bp5(&["eval", "--circuit", ckt.to_str().unwrap(), "--input", "10"]);
    assert_eq!((code, stdout.trim()), (0, "0"));

    let (code, _, stderr) = bp5(&["eval", "--input", "11"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exactly one"));
}

#[test]
fn equiv_distinguishes_equal_from_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dir.path().join("and.ckt");
    let pbp = dir.path().join("and.pbp");
    let x1 = dir.path().join("x1.ckt");
    write(&ckt, AND_CIRCUIT);
    write(&x1, "inputs 2\noutput x1\n");
    bp5(&[
        "compile",
        "--circuit",
        ckt.to_str().unwrap(),
        "--out",
        pbp.to_str().unwrap(),
    ]);

    let (code, stdout, _) = bp5(&[
        "equiv",
        "--a",
        ckt.to_str().unwrap(),
        "--b",
        pbp.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "equal over 2^2 inputs");

    // x1 and x1∧x2 first differ at x1=1, x2=0.
    let (code, stdout, _) = bp5(&[
        "equiv",
        "--a",
        x1.to_str().unwrap(),
        "--b",
        pbp.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert_eq!(stdout.trim(), "counterexample 10");

    let junk = dir.path().join("junk.txt");
    write(&junk, "what even is this\n");
    let (code, _, stderr) = bp5(&[
        "equiv",
        "--a",
        junk.to_str().unwrap(),
        "--b",
        ckt.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unrecognized format"));
}

#[test]
fn bp2circuit_and_roundtrip_on_a_small_program() {
    let dir = tempfile::tempdir().unwrap();
    let gbp = dir.path().join("small.gbp");
    let ckt = dir.path().join("small.ckt");
    write(
        &gbp,
        "genbp n=2 levels=3 width=2\n\
         node 0:0 var=1 e0=0 e1=1\n\
         node 0:1 var=2 e0=1 e1=0\n\
         node 1:0 var=2 e0=0 e1=1\n\
         node 1:1 var=1 e0=1 e1=1\n\
         sink 2:0 label=0\n\
         sink 2:1 label=1\n\
         start 0\n",
    );

    let (code, stdout, _) = bp5(&[
        "bp2circuit",
        "--bp",
        gbp.to_str().unwrap(),
        "--out",
        ckt.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("depth_bound=4"));

    // The emitted circuit must be equivalent to the program it came from.
    let (code, stdout, _) = bp5(&[
        "equiv",
        "--a",
        gbp.to_str().unwrap(),
        "--b",
        ckt.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");

    let (code, stdout, _) = bp5(&["roundtrip", "--genbp", gbp.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("equal over 2^2 inputs"));
    assert!(stdout.contains("compiled_length="));
    assert!(stdout.contains("length_bound=4^4"));
}

#[test]
fn sort_pipeline_counts_and_benchmarks() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.sadv");

    let (code, stdout, _) = bp5(&[
        "sort-table",
        "--n",
        "8",
        "--k",
        "3",
        "--b",
        "2",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("entries=16"));
    assert!(stdout.contains("bytes=49"));

    let (code, stdout, _) = bp5(&[
        "sort",
        "--table",
        table.to_str().unwrap(),
        "--input",
        "3,1,2,0,3,3,0,1",
        "--count",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("0,0,1,1,2,3,3,3"));
    let rest: Vec<&str> = lines.collect();
    assert!(rest.iter().any(|l| l.starts_with("comparisons=")));
    assert!(rest.contains(&"key_ops=8"));
    assert!(rest.iter().any(|l| l.starts_with("reference_comparisons=")));

    let (code, _, stderr) = bp5(&[
        "sort",
        "--table",
        table.to_str().unwrap(),
        "--input",
        "3,1,9,0,3,3,0,1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds"));

    let (code, stdout, _) = bp5(&[
        "bench-sort",
        "--table",
        table.to_str().unwrap(),
        "--trials",
        "40",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("seed=0"));
    assert!(stdout.contains("trials=40"));
    assert!(stdout.contains("key_ops_per_sort=8"));
    let grab = |key: &str| -> f64 {
        stdout
            .lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(grab("advice_mean=") < grab("reference_mean="));
}

#[test]
fn format_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    // Truncated table file.
    let table = dir.path().join("t.sadv");
    bp5(&[
        "sort-table",
        "--n",
        "4",
        "--k",
        "1",
        "--out",
        table.to_str().unwrap(),
    ]);
    let bytes = std::fs::read(&table).unwrap();
    std::fs::write(&table, &bytes[..bytes.len() - 1]).unwrap();
    let (code, _, stderr) = bp5(&[
        "sort",
        "--table",
        table.to_str().unwrap(),
        "--input",
        "0,1,0,1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"));

    // Bad circuit syntax.
    let ckt = dir.path().join("bad.ckt");
    write(&ckt, "inputs 2\ng = XOR x1 x2\noutput g\n");
    let out = dir.path().join("out.pbp");
    let (code, _, stderr) = bp5(&[
        "compile",
        "--circuit",
        ckt.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("XOR"));

    // Unknown flag: clap's usage error.
    let (code, _, _) = bp5(&["simulate", "--no-such-flag"]);
    assert_eq!(code, 2);

    // Missing file.
    let (code, _, stderr) = bp5(&["roundtrip", "--genbp", "/nonexistent/x.gbp"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"));
}
