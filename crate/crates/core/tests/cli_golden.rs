//! Byte-for-byte comparison of CLI output with the files in docs/golden.
//! Regenerate with the release binary after an intentional format change.

use std::path::PathBuf;

use stickel::cli::{run, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};

const GOLDEN: &[(&str, &[&str])] = &[
    ("scan-irregular.tsv", &["scan-irregular", "--pmax", "160"]),
    ("bernoulli.tsv", &["bernoulli", "--p", "37"]),
    ("stickelberger-show.json", &["stickelberger", "show", "-p", "7"]),
    ("gauss-verify.json", &["gauss", "verify", "-p", "5", "-q", "11"]),
    ("gauss-verify-inert.json", &["gauss", "verify", "-p", "7", "-q", "2"]),
    ("principality-test.json", &["principality", "test", "-p", "7", "-q", "2"]),
    ("principality-corollary.json", &["principality", "corollary", "-p", "7"]),
    ("principality-probe.json", &["principality", "probe", "-p", "3"]),
];

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn invoke(args: &[&str], jobs: &str) -> stickel::cli::Outcome {
    run(["stickel", "--jobs", jobs].iter().chain(args))
}

#[test]
fn outputs_match_golden_files() {
    for (file, args) in GOLDEN {
        let expected = golden(file);
        for jobs in ["1", "3"] {
            let out = invoke(args, jobs);
            assert_eq!(out.code, EXIT_OK, "{file}: {}", out.stderr);
            assert!(out.stderr.is_empty(), "{file}: {}", out.stderr);
            assert!(out.stdout == expected, "{file} differs from golden output with --jobs {jobs}");
        }
    }
}

#[test]
fn json_outputs_parse_and_carry_decimal_strings() {
    for (file, _) in GOLDEN.iter().filter(|(f, _)| f.ends_with(".json")) {
        let v: serde_json::Value = serde_json::from_str(&golden(file)).unwrap();
        assert_eq!(v["tool"], "stickel", "{file}");
        assert_eq!(v["summary"]["failed"], 0, "{file}");
    }
    let g: serde_json::Value = serde_json::from_str(&golden("gauss-verify.json")).unwrap();
    let rec = &g["records"][0];
    assert!(rec["G"].as_array().unwrap().iter().all(|c| c.is_string()), "{}", rec["G"]);
    let rows = rec["g"]["coeffs"].as_array().unwrap();
    assert!(rows.iter().all(|r| r.as_array().unwrap().iter().all(|c| c.is_string())));
}

#[test]
fn input_errors_exit_2() {
    let bad: &[&[&str]] = &[
        &["gauss", "verify", "-p", "5", "-q", "5"],
        &["gauss", "verify", "-p", "9", "-q", "5"],
        &["gauss", "verify", "-p", "5"],
        &["bernoulli", "--p", "1"],
        &["scan-irregular", "--pmax", "1000000"],
        &["scan-irregular", "--pmin", "50", "--pmax", "40"],
        &["principality", "test", "-p", "7", "-q", "29"],
        &["principality", "corollary", "-p", "13"],
        &["principality", "probe", "-p", "3", "--radius", "1001"],
        &["stickelberger", "show", "-p", "7", "-v", "2"],
        &["nonsense"],
    ];
    for args in bad {
        let out = invoke(args, "1");
        assert_eq!(out.code, EXIT_INPUT, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn exhausted_precision_is_a_check_failure() {
    let out = invoke(&["gauss", "verify", "-p", "5", "-q", "11", "--lambda-cap", "1"], "1");
    assert_eq!(out.code, EXIT_CHECK_FAILED, "{}", out.stderr);
}
