//! End-to-end runs of the binary: exit codes, plain and JSON reports, and
//! pipe composability of the artifact-producing subcommands.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_str().unwrap().to_string()
}

fn mrtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrtk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mrtk_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mrtk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn parse_reports_structure() {
    let out = mrtk(&["parse", &fixture("example5.qdimacs")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: ok"));
    assert!(text.contains("vars: 5"));
    assert!(text.contains("clauses: 7"));
}

#[test]
fn parse_rejects_malformed_input_with_exit_one() {
    let out = mrtk_stdin(&["parse", "-"], "p cnf 1 1\n1 -1 0\n");
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: invalid"));
    // Missing file is an IO error, not a reject.
    let out = mrtk(&["parse", "/nonexistent/x.qdimacs"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_mrest_accepts_golden_proofs() {
    let out = mrtk(&[
        "check-mrest",
        &fixture("example3.qdimacs"),
        &fixture("table1.mrt"),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: valid"));
    assert!(text.contains("size: 7"));

    let out = mrtk(&[
        "check-mrest",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrt"),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: valid"));
    assert!(text.contains("size: 13"));
    assert!(text.contains("regular: true"));
}

#[test]
fn json_report_matches_plain_verdict() {
    for (q, p, expect) in [
        ("example5.qdimacs", "table2.mrt", "valid"),
        ("example3.qdimacs", "table1_union_clash.mrt", "invalid"),
    ] {
        let plain = mrtk(&["check-mrest", &fixture(q), &fixture(p)]);
        let json = mrtk(&["--json", "check-mrest", &fixture(q), &fixture(p)]);
        assert_eq!(code(&plain), code(&json));
        let v: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdict"], expect);
        assert!(stdout(&plain).contains(&format!("verdict: {expect}")));
    }
}

#[test]
fn mutants_hit_their_reason_codes() {
    let cases = [
        ("table1_union_clash.mrt", "inconsistent-union", 7),
        ("table1_taut.mrt", "tautological-resolvent", 3),
        ("table1_bad_axiom.mrt", "bad-axiom", 1),
        ("table1_bad_resolvent.mrt", "bad-resolvent", 3),
        ("table1_pivot_universal.mrt", "pivot-universal", 3),
    ];
    for (file, reason, line) in cases {
        let out = mrtk(&[
            "check-mrest",
            &fixture("example3.qdimacs"),
            &fixture(file),
        ]);
        assert_eq!(code(&out), 1, "{file}");
        let text = stdout(&out);
        assert!(text.contains("verdict: invalid"), "{file}: {text}");
        assert!(text.contains(&format!("reason: {reason}")), "{file}: {text}");
        assert!(
            text.contains(&format!("failing_line: {line}")),
            "{file}: {text}"
        );
    }
}

#[test]
fn check_mres_blocks_the_final_select() {
    let out = mrtk(&[
        "check-mres",
        &fixture("example3.qdimacs"),
        &fixture("table1.mrs"),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("reason: blocked-select"));
    assert!(text.contains("failing_line: 7"));

    let out = mrtk(&[
        "check-mres",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrs"),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn convert_reproduces_the_printed_skeleton() {
    let out = mrtk(&[
        "convert",
        "mres-to-mrest",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrs"),
    ]);
    assert_eq!(code(&out), 0);
    let expected = std::fs::read_to_string(fixture("table2.mrt")).unwrap();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn emit_and_check_certificate() {
    let out = mrtk(&[
        "emit-efrege",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrt"),
    ]);
    assert_eq!(code(&out), 0);
    let cert = stdout(&out);
    let check = mrtk_stdin(
        &["check-efrege", &fixture("example5.qdimacs"), "-"],
        &cert,
    );
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    assert!(stdout(&check).contains("verdict: valid"));
}

#[test]
fn extract_and_verify_countermodel() {
    let out = mrtk(&[
        "extract-strategy",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrt"),
    ]);
    assert_eq!(code(&out), 0);
    let dump = stdout(&out);
    assert!(dump.starts_with("p strat 1"));
    let check = mrtk_stdin(
        &["verify-countermodel", &fixture("example5.qdimacs"), "-"],
        &dump,
    );
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    assert!(stdout(&check).contains("verdict: true"));
    assert!(stdout(&check).contains("ambiguous_defaults: 0"));
}

#[test]
fn gen_search_check_pipe_composes() {
    let gen = mrtk(&["gen-cr", "1"]);
    assert_eq!(code(&gen), 0);
    let q = stdout(&gen);
    assert!(q.starts_with("p cnf 4 4"));

    let search = mrtk_stdin(&["search", "-", "--max-lines", "8"], &q);
    assert_eq!(code(&search), 0, "{}", stdout(&search));
    let proof = stdout(&search);
    assert!(proof.starts_with("p mrt"));

    let tmp = std::env::temp_dir().join("mrtk_cli_cr1.qdimacs");
    std::fs::write(&tmp, &q).unwrap();
    let check = mrtk_stdin(&["check-mrest", tmp.to_str().unwrap(), "-"], &proof);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    assert!(stdout(&check).contains("verdict: valid"));
}

#[test]
fn search_closed_and_budget_codes() {
    let gen = mrtk(&["gen-cr", "1"]);
    let q = stdout(&gen);
    let closed = mrtk_stdin(&["search", "-", "--max-lines", "3"], &q);
    assert_eq!(code(&closed), 1);
    assert!(stdout(&closed).contains("verdict: none"));

    let budget = mrtk_stdin(
        &["search", "-", "--max-lines", "8", "--max-states", "2"],
        &q,
    );
    assert_eq!(code(&budget), 3);
    assert!(stdout(&budget).contains("verdict: budget-exhausted"));
}

#[test]
fn stats_reports_counts() {
    let out = mrtk(&[
        "stats",
        &fixture("example5.qdimacs"),
        &fixture("table2.mrt"),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("size: 13"));
    assert!(text.contains("width:"));
    assert!(text.contains("regular: true"));
    assert!(text.contains("nodes: 41"));
}

#[test]
fn usage_errors_exit_two() {
    let out = mrtk(&["check-mrest", &fixture("example3.qdimacs")]);
    assert_eq!(code(&out), 2);
    let out = mrtk_stdin(&["check-mrest", "-", "-"], "not qdimacs");
    assert_eq!(code(&out), 2);
}
