#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Report cases: expected-output file stem, then the arguments, run from the
/// golden directory.
pub const REPORTS: &[(&str, &[&str])] = &[
    ("segment_e", &["e-invariant", "segment.mg"]),
    ("segment_measure", &["measure", "segment.mg"]),
    ("segment_green", &["green", "segment.mg", "A", "B"]),
    ("circle_e", &["e-invariant", "circle.mg"]),
    ("circle_green", &["green", "circle.mg", "O", "P"]),
    ("circle_resistance", &["resistance", "circle.mg", "O", "P"]),
    ("theta_e", &["e-invariant", "theta.mg"]),
    ("theta_measure", &["measure", "theta.mg"]),
    ("theta_resistance", &["resistance", "theta.mg", "A", "M"]),
    ("chain_e", &["e-invariant", "chain.mg"]),
    ("two_elliptic", &["fiber", "analyze", "two_elliptic.fib"]),
    ("nodal", &["fiber", "analyze", "nodal.fib"]),
    ("banana", &["fiber", "analyze", "banana.fib"]),
    ("radius_g2", &["bounds", "radius", "--genus", "2", "--delta", "0,1"]),
    ("radius_g3", &["bounds", "radius", "--genus", "3", "--delta", "1,2", "--chain-fibers", "--hyperelliptic"]),
    ("slope_g3", &["bounds", "slope", "--genus", "3", "--lambda", "2", "--delta", "3,1"]),
    ("reference_g2", &["bounds", "reference", "--genus", "2", "--delta", "1,1"]),
    ("reference_smooth", &["bounds", "reference", "--genus", "5", "--delta", "0,0,0", "--smooth"]),
    ("reference_irreducible", &["bounds", "reference", "--genus", "3", "--delta", "1,0", "--irreducible"]),
    ("segment_e_json", &["--json", "e-invariant", "segment.mg"]),
    ("two_elliptic_json", &["fiber", "analyze", "two_elliptic.fib", "--json"]),
    ("batch", &["batch", "."]),
];

/// Error cases: arguments, exit code and the error class stderr must name.
pub const ERRORS: &[(&[&str], i32, &str)] = &[
    (&["e-invariant", "minus_two.mg"], 3, "DegreeMinusTwo"),
    (&["e-invariant", "malformed/bad_header.mg"], 2, "SyntaxError"),
    (&["e-invariant", "malformed/missing_length.mg"], 2, "SyntaxError"),
    (&["e-invariant", "malformed/unknown_vertex.mg"], 2, "UnknownVertex"),
    (&["e-invariant", "malformed/bad_rational.mg"], 2, "BadRational"),
    (&["e-invariant", "malformed/zero_length.mg"], 2, "NonpositiveLength"),
    (&["e-invariant", "malformed/disconnected.mg"], 2, "Disconnected"),
    (&["fiber", "analyze", "malformed/unknown_component.fib"], 2, "UnknownComponent"),
    (&["fiber", "analyze", "malformed/genus_one.fib"], 2, "GenusTooSmall"),
    (&["fiber", "analyze", "malformed/bad_keyword.fib"], 2, "SyntaxError"),
    (&["green", "segment.mg", "A", "Z"], 2, "UnknownPoint"),
    (&["e-invariant", "no_such_file.mg"], 2, "IoError"),
    (&["bounds", "reference", "--genus", "3", "--delta", "1,0"], 3, "RegimeUnspecified"),
    (&["bounds", "radius", "--genus", "3", "--delta", "1"], 2, "SizeMismatch"),
    (&["bounds", "slope", "--genus", "2", "--delta", "0,1"], 2, "Usage"),
    (&["bounds", "radius", "--genus", "2", "--delta", "0,x"], 2, "BadRational"),
    (&["frobnicate"], 2, "error"),
];

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn mg(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_mg"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("spawn mg");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn expected(stem: &str) -> PathBuf {
    golden_dir().join("expected").join(format!("{stem}.out"))
}

/// Mismatches between the binary and the golden reports, one message each.
/// With `MG_BLESS=1` the expected files are rewritten instead.
pub fn golden_mismatches() -> Vec<String> {
    let bless = std::env::var_os("MG_BLESS").is_some();
    let mut bad = Vec::new();
    for (stem, args) in REPORTS {
        let o = mg(args);
        let path = expected(stem);
        if bless {
            std::fs::write(&path, &o.stdout).expect("write golden");
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        let want_code = if *stem == "batch" { 3 } else { 0 };
        if o.stdout != want || o.code != want_code {
            bad.push(format!("{stem}: exit {} (want {want_code})\n--- got\n{}--- want\n{want}", o.code, o.stdout));
        }
    }
    bad
}

pub fn error_mismatches() -> Vec<String> {
    let mut bad = Vec::new();
    for (args, code, class) in ERRORS {
        let o = mg(args);
        if o.code != *code || !o.stderr.contains(class) || !o.stdout.is_empty() {
            bad.push(format!("{args:?}: exit {} (want {code}), stderr {:?}", o.code, o.stderr));
        }
    }
    bad
}
