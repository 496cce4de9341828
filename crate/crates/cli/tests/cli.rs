//! Black-box tests of the `milnor` binary: golden output lines, exit codes,
//! kernel scans, and file output.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

// ---- golden output ----

#[test]
fn apply_emits_the_frozen_json_record() {
    let out = run(&[
        "apply", "-l", "2", "-n", "3", "--word", "Q1,Q0", "--expr", "x1*x2*x3", "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let expected = concat!(
        "{\"prime\":2,\"rank\":3,\"input\":\"x1*x2*x3\",\"word\":\"Q1,Q0\",",
        "\"output\":\"y1^2*y2*x3 + y1^2*y3*x2 + y1*y2^2*x3 + y1*y3^2*x2 + y2^2*y3*x1 + y2*y3^2*x1\",",
        "\"output_terms\":[",
        "{\"coeff\":1,\"tau\":0,\"ys\":[2,1,0],\"xs\":[3]},",
        "{\"coeff\":1,\"tau\":0,\"ys\":[2,0,1],\"xs\":[2]},",
        "{\"coeff\":1,\"tau\":0,\"ys\":[1,2,0],\"xs\":[3]},",
        "{\"coeff\":1,\"tau\":0,\"ys\":[1,0,2],\"xs\":[2]},",
        "{\"coeff\":1,\"tau\":0,\"ys\":[0,2,1],\"xs\":[1]},",
        "{\"coeff\":1,\"tau\":0,\"ys\":[0,1,2],\"xs\":[1]}",
        "],\"input_bidegree\":[3,3],\"shift\":[4,1],\"output_bidegree\":[7,4],\"is_zero\":false}\n"
    );
    assert_eq!(stdout(&out), expected);
}

#[test]
fn apply_normalizes_products_with_koszul_signs() {
    let out = run(&["apply", "-l", "3", "--word", "P0", "--expr", "x2*x1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("output:   2*x1*x2"), "{}", stdout(&out));
}

#[test]
fn apply_reports_zero_outputs_with_null_bidegree() {
    let out = run(&["apply", "-l", "3", "--word", "Q1", "--expr", "y1", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"output\":\"0\""), "{text}");
    assert!(text.contains("\"output_bidegree\":null"), "{text}");
    assert!(text.contains("\"is_zero\":true"), "{text}");
}

#[test]
fn apply_matches_the_generator_formulas() {
    // Q1(x1) = y1^l, Q2(y1) = 0, and P1 acts as the l-th power on y1 in
    // its own bidegree.
    let q1 = run(&["apply", "-l", "3", "-n", "3", "--word", "Q1", "--expr", "x1", "--format", "json"]);
    assert!(q1.status.success());
    assert!(stdout(&q1).contains("\"output\":\"y1^3\""), "{}", stdout(&q1));

    let q2 = run(&["apply", "-l", "2", "-n", "3", "--word", "Q2", "--expr", "y1", "--format", "json"]);
    assert!(q2.status.success());
    assert!(stdout(&q2).contains("\"is_zero\":true"), "{}", stdout(&q2));

    let p1 = run(&["apply", "-l", "5", "-n", "1", "--word", "P1", "--expr", "y1", "--format", "json"]);
    assert!(p1.status.success());
    assert!(stdout(&p1).contains("\"output\":\"y1^5\""), "{}", stdout(&p1));
}

#[test]
fn unicode_tau_is_accepted_on_input() {
    let out = run(&["apply", "-l", "5", "--word", "P0", "--expr", "τ*y1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("output:   tau*y1"), "{}", stdout(&out));
}

// ---- exit codes ----

#[test]
fn success_paths_exit_zero() {
    for args in [
        vec!["verify", "-l", "7", "--suite", "formulas"],
        vec!["apply", "-l", "2", "--word", "beta", "--expr", "x1"],
        vec!["scan", "-l", "3", "--bidegree", "2,1", "--word", "Q1"],
        vec!["certify", "--group", "g2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["certify", "--group", "E6"],
        vec!["apply", "-l", "4", "--word", "Q0", "--expr", "x1"],
        vec!["apply", "-l", "3", "--word", "Q0", "--expr", "x1^2"],
        vec!["apply", "-l", "3", "--word", "R4", "--expr", "x1"],
        vec!["apply", "-l", "3", "--word", "Q0", "--expr", "x7"],
        vec!["scan", "-l", "2", "--bidegree", "200000,100000", "--word", "Q1"],
        vec!["scan", "-l", "2", "--bidegree", "3", "--word", "Q1"],
        vec!["verify", "-l", "11", "--max-q-index", "99"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{args:?} should explain itself");
    }
    // clap itself also reports malformed invocations with exit code 2.
    for args in [vec!["frobnicate"], vec!["apply", "--word", "Q0"], vec![]] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_positions_to_stderr() {
    let out = run(&["apply", "-l", "3", "--word", "Q0", "--expr", "x1 +\n zz9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2, column 2"), "{}", stderr(&out));
}

#[test]
fn operation_index_bounds_are_enforced() {
    let q13 = run(&["apply", "-l", "2", "--word", "Q13", "--expr", "1"]);
    assert_eq!(q13.status.code(), Some(2), "{}", stderr(&q13));
    let p_big = run(&["apply", "-l", "2", "--word", "P10001", "--expr", "x1"]);
    assert_eq!(p_big.status.code(), Some(2), "{}", stderr(&p_big));
    // The boundary values are accepted; instability makes them instant.
    let q12 = run(&["apply", "-l", "2", "--word", "Q12", "--expr", "1"]);
    assert_eq!(q12.status.code(), Some(0), "{}", stderr(&q12));
    let p_max = run(&["apply", "-l", "2", "--word", "P10000", "--expr", "x1"]);
    assert_eq!(p_max.status.code(), Some(0), "{}", stderr(&p_max));
}

// ---- scans ----

#[test]
fn scan_finds_the_full_kernel_when_the_target_is_empty() {
    // At l = 3 the target bidegree of Q1 on (2, 1) is (7, 3), which is
    // empty, so y1, y2, y3 all lie in the kernel.
    let out = run(&[
        "scan", "-l", "3", "-n", "3", "--bidegree", "2,1", "--word", "Q1", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"source_dimension\":3"), "{text}");
    assert!(text.contains("\"target_dimension\":0"), "{text}");
    assert!(text.contains("\"matrix_rank\":0"), "{text}");
    assert!(text.contains("\"kernel_dimension\":3"), "{text}");
    assert!(text.contains("\"kernel_basis\":[\"y1\",\"y2\",\"y3\"]"), "{text}");
}

#[test]
fn scan_reports_trivial_kernels() {
    // Q1 is injective on bidegree (3, 3) at l = 2 and rank 3.
    let out = run(&[
        "scan", "-l", "2", "-n", "3", "--bidegree", "3,3", "--word", "Q1", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"source_dimension\":10"), "{text}");
    assert!(text.contains("\"matrix_rank\":10"), "{text}");
    assert!(text.contains("\"kernel_dimension\":0"), "{text}");
    assert!(text.contains("\"kernel_basis\":[]"), "{text}");
}

#[test]
fn scan_satisfies_rank_nullity_on_samples() {
    for (l, bidegree, word) in [
        ("2", "4,3", "Q1"),
        ("2", "5,4", "Q0"),
        ("3", "4,3", "Q1,Q0"),
        ("5", "3,3", "P1"),
        ("3", "0,0", "Q1"),
    ] {
        let out = run(&["scan", "-l", l, "--bidegree", bidegree, "--word", word, "--format", "json"]);
        assert!(out.status.success(), "{}", stderr(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let source = report["source_dimension"].as_u64().unwrap();
        let rank = report["matrix_rank"].as_u64().unwrap();
        let kernel = report["kernel_dimension"].as_u64().unwrap();
        assert_eq!(rank + kernel, source, "rank-nullity for {word} on {bidegree} at l = {l}");
        assert_eq!(
            report["kernel_basis"].as_array().unwrap().len() as u64,
            kernel
        );
    }
}

#[test]
fn scan_of_the_witness_bidegree_excludes_the_witness_from_the_kernel() {
    // The composite Q1,Q0 on bidegree (3, 3) at l = 2: ten basis classes,
    // every reported kernel vector genuinely dies, and x1*x2*x3 does not
    // (it is the nonvanishing witness), so it lies outside the kernel.
    let out = run(&[
        "scan", "-l", "2", "-n", "3", "--bidegree", "3,3", "--word", "Q1,Q0", "--format", "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["source_dimension"], 10);
    for vector in report["kernel_basis"].as_array().unwrap() {
        let expr = vector.as_str().unwrap();
        assert_ne!(expr, "x1*x2*x3");
        let dies = run(&[
            "apply", "-l", "2", "-n", "3", "--word", "Q1,Q0", "--expr", expr, "--format", "json",
        ]);
        assert!(dies.status.success());
        assert!(stdout(&dies).contains("\"is_zero\":true"), "{expr}: {}", stdout(&dies));
    }
    let witness = run(&[
        "apply", "-l", "2", "-n", "3", "--word", "Q1,Q0", "--expr", "x1*x2*x3", "--format", "json",
    ]);
    assert!(stdout(&witness).contains("\"is_zero\":false"), "{}", stdout(&witness));
}

#[test]
fn scanning_the_unit_bidegree_keeps_constants_in_the_kernel() {
    let out = run(&["scan", "-l", "3", "--bidegree", "0,0", "--word", "Q1", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"kernel_dimension\":1"), "{text}");
    assert!(text.contains("\"kernel_basis\":[\"1\"]"), "{text}");
}

// ---- certificates to disk ----

#[test]
fn certify_out_flag_writes_the_json_line() {
    let path = std::env::temp_dir().join(format!("milnor-cert-{}.json", std::process::id()));
    let out = run(&[
        "certify", "--group", "F4", "--format", "json", "--out",
        path.to_str().expect("temp path is utf-8"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let on_disk = std::fs::read_to_string(&path).expect("certificate file written");
    std::fs::remove_file(&path).ok();
    assert_eq!(on_disk, stdout(&out), "file content matches stdout");
    assert!(on_disk.ends_with('\n'));
    let cert: serde_json::Value = serde_json::from_str(&on_disk).unwrap();
    assert_eq!(cert["group"], "F4");
    assert_eq!(cert["prime"], 3);
    assert_eq!(cert["nonzero"], true);
}

// ---- verify output shape ----

#[test]
fn verify_properties_pass_vacuously_at_degree_zero() {
    // With the degree cap at zero the sample pool holds only tau powers, and
    // the scalar laws still hold, so the suite passes without crashing.
    let out = run(&[
        "verify", "-l", "2", "--suite", "properties", "--max-degree", "0", "--samples", "25",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn verify_json_report_is_well_formed() {
    let out = run(&["verify", "-l", "2", "--samples", "25", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["prime"], 2);
    assert_eq!(report["failed"], 0);
    assert_eq!(report["passed"], true);
    let suites = report["suites"].as_array().unwrap();
    let names: Vec<&str> = suites.iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["formulas", "properties"]);
    for suite in suites {
        for check in suite["checks"].as_array().unwrap() {
            assert_eq!(check["passed"], true, "{check}");
        }
    }
}
