//! End-to-end tests for the `cocylab` binary: pinned outputs, the exit-code
//! contract, and byte-level determinism across reruns.

use std::process::{Command, Output};

fn cocylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocylab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn asai_on_s_s_prints_one() {
    let out = cocylab(&[
        "sl2",
        "asai",
        "--m1",
        r#"[["0","-1"],["1","0"]]"#,
        "--m2",
        r#"[["0","-1"],["1","0"]]"#,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":1}\n");
}

#[test]
fn named_matrices_match_explicit_entries() {
    let explicit = cocylab(&[
        "sl2",
        "asai",
        "--m1",
        r#"[["0","-1"],["1","0"]]"#,
        "--m2",
        r#"[["0","-1"],["1","0"]]"#,
    ]);
    let named = cocylab(&["sl2", "asai", "--m1", "S", "--m2", "S"]);
    assert_eq!(code(&named), 0);
    assert_eq!(stdout_str(&named), stdout_str(&explicit));
}

#[test]
fn integer_certification_on_radius_four_ball_is_nonsplit() {
    let out = cocylab(&[
        "split", "certify", "--cocycle", "asai", "--gens", "S,T", "--radius",
        "4", "--coeff", "Z",
    ]);
    assert_eq!(code(&out), 1, "NonSplit verdicts exit 1");
    assert_eq!(
        stdout_str(&out),
        concat!(
            "{\"certificate\":{\"constraint\":{\"coeffs\":[4,0],\"rhs\":1},",
            "\"coordinate\":0,\"relation\":\"S S S S\"},",
            "\"verdict\":\"NonSplit\"}\n"
        )
    );
}

#[test]
fn rational_certification_on_radius_six_ball_is_split() {
    let out = cocylab(&[
        "split", "certify", "--cocycle", "asai", "--gens", "S,T", "--radius",
        "6", "--coeff", "Q",
    ]);
    assert_eq!(code(&out), 0, "Split verdicts exit 0");
    let text = stdout_str(&out);
    assert!(text.contains("\"verdict\":\"Split\""));
    // The identity gets 0 and the order-4 generator gets 1/4.
    assert!(text.contains(r#"{"f":["0"],"g":"I"}"#));
    assert!(text.contains(r#"{"f":["1/4"],"g":"S"}"#));
}

#[test]
fn extension_identity_is_absorbing() {
    let out = cocylab(&[
        "ext",
        "mul",
        "--cocycle",
        "asai",
        "--x",
        r#"{"a":[0],"g":"I"}"#,
        "--y",
        r#"{"a":[0],"g":"I"}"#,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"a\":[0],\"g\":\"I\"}\n");
}

#[test]
fn fourth_power_of_lifted_s_lands_on_central_one() {
    let out = cocylab(&[
        "ext", "pow", "--cocycle", "asai", "--x", r#"{"a":[0],"g":"S"}"#,
        "--exp", "4",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"a\":[1],\"g\":\"I\"}\n");
}

#[test]
fn hyphen_leading_values_parse() {
    let out = cocylab(&[
        "cocycle", "eval", "--cocycle", "asai", "--modulus", "4", "--x", "-I",
        "--y", "-I",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":[3]}\n");

    let out = cocylab(&[
        "steinberg", "eval", "--symbol", "ordered", "--x", "-1", "--y", "-1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":1}\n");
}

#[test]
fn violation_reports_exit_one_but_still_print_json() {
    let out = cocylab(&[
        "steinberg",
        "audit",
        "--symbol",
        "xor",
        "--suite",
        "core",
        "--samples",
        "200",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 1, "a dirty audit exits 1");
    let text = stdout_str(&out);
    let parsed: serde_json::Value =
        serde_json::from_str(&text).expect("output stays valid JSON");
    assert!(parsed["violation_count"].as_u64().unwrap() > 0);
    assert!(parsed["violations"].as_array().unwrap().len() > 0);
}

#[test]
fn usage_and_parse_errors_exit_two_on_stderr() {
    // Unknown flag.
    let out = cocylab(&["sl2", "asai", "--bogus", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());

    // Generator index out of range for the declared rank.
    let out = cocylab(&["words", "mul", "--rank", "2", "--x", "a1 a7", "--y", "e"]);
    assert_eq!(code(&out), 2);
    assert!(stdout_str(&out).is_empty());
    assert!(stderr_str(&out).contains("out of range"));

    // Non-unimodular matrix.
    let out = cocylab(&[
        "sl2", "asai", "--m1", r#"[["1","0"],["0","2"]]"#, "--m2", "I",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("determinant"));

    // Malformed JSON for an extension element.
    let out = cocylab(&["ext", "inv", "--cocycle", "asai", "--x", "not json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn words_canonicalize_on_parse() {
    let out = cocylab(&["words", "mul", "--m", "3", "--n", "4", "--x", "A1 A1", "--y", "e"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":\"A2\"}\n");

    // Wrap-around in the first factor: with m = 2 the square is trivial.
    let out = cocylab(&["words", "mul", "--m", "2", "--n", "3", "--x", "A1 A1", "--y", "e"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":\"e\"}\n");

    // Free reduction across the product boundary.
    let out = cocylab(&["words", "mul", "--rank", "2", "--x", "a1 a2", "--y", "a2^-1 a1^-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":\"e\"}\n");
}

#[test]
fn seeded_commands_are_byte_identical_across_reruns() {
    let commands: &[&[&str]] = &[
        &["qc", "image", "--rank", "2", "--pattern", "a1^2", "--samples",
          "400", "--seed", "11"],
        &["cocycle", "verify", "--cocycle", "asai", "--samples", "300",
          "--seed", "7"],
        &["ext", "verify", "--cocycle", "asai", "--modulus", "12",
          "--samples", "200", "--seed", "3"],
        &["split", "certify", "--cocycle", "asai", "--gens", "S,T",
          "--radius", "5", "--coeff", "Q"],
        &["braid", "split-witness", "--modulus", "12", "--pairs", "150",
          "--seed", "4"],
    ];
    for args in commands {
        let first = cocylab(args);
        let second = cocylab(args);
        assert_eq!(first.stdout, second.stdout, "rerun differs: {args:?}");
        assert_eq!(code(&first), code(&second));
    }
}

#[test]
fn braid_pinned_values() {
    let out = cocylab(&["braid", "discrepancy", "--k1", "0", "--k2", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"value\":0}\n");

    let out = cocylab(&["braid", "full-twist", "--k1", "0", "--k2", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "{\"a\":[-1],\"g\":\"I\"}\n");
}
