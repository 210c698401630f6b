use std::fs;
use std::process::Command;

use origami_cli::{run, Outcome, EXIT_ASSERT, EXIT_EVAL, EXIT_OK, EXIT_PARSE, EXIT_PRECISION, EXIT_USAGE};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("origami").chain(args.iter().copied()))
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("origami-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn exit_code_matrix() {
    let cases = [
        ("good.ori", EXIT_OK),
        ("bad_syntax.ori", EXIT_PARSE),
        ("eval_error.ori", EXIT_EVAL),
        ("assert_fail.ori", EXIT_ASSERT),
        ("precision.ori", EXIT_PRECISION),
    ];
    for (name, code) in cases {
        let out = cli(&["run", &fixture(name)]);
        assert_eq!(out.code, code, "{name}: {out:?}");
    }
}

#[test]
fn the_binary_uses_the_same_codes() {
    let bin = env!("CARGO_BIN_EXE_origami");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["run", &fixture("bad_syntax.ori")]);
    assert_eq!(o.status.code(), Some(EXIT_PARSE));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad_syntax.ori:2:20"), "{err}");
    let o = status(&["solve-cubic", "0", "-2"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("root: cbrt(2) ≈ 1.2599"));
    assert_eq!(status(&["no-such-command"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn assertion_failures_show_both_sides() {
    let out = cli(&["run", &fixture("assert_fail.ori")]);
    assert!(out.stdout.contains("FAIL line 2: assertion failed: assert A.x == 1.4142"), "{}", out.stdout);
    assert!(out.stdout.contains("left  ≈ 1.41421356237309504880168872421"));
    assert!(out.stdout.contains("left  = sqrt(2)"));
    assert!(out.stdout.contains("ok   3: assert A.x > 1"));
    assert!(out.stdout.ends_with("2 assertion(s), 1 failed\n"));
}

#[test]
fn level_flag_overrides_the_script() {
    assert_eq!(cli(&["run", &fixture("eval_error.ori"), "--level", "origami"]).code, EXIT_OK);
    assert_eq!(cli(&["run", &fixture("good.ori"), "--level", "paper"]).code, EXIT_USAGE);
}

#[test]
fn solver_commands() {
    let out = cli(&["solve-cubic", "0", "-2", "--digits", "16"]);
    assert_eq!(out.stdout, "root: cbrt(2) ≈ 1.259921049894873\n");

    let out = cli(&["trisect", "-1/2", "--digits", "6"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].ends_with("≈ -0.939693"), "{}", out.stdout);
    assert!(lines[1].ends_with("≈ 0.173648"));
    assert!(lines[2].ends_with("≈ 0.766044"));

    let out = cli(&["solve-quartic", "-5", "0", "4"]);
    assert_eq!(out.stdout, "root: -2 ≈ -2\nroot: -1 ≈ -1\nroot: 1 ≈ 1\nroot: 2 ≈ 2\n");

    let out = cli(&["solve-cubic", "-3", "2"]);
    assert_eq!(out.stdout, "root: -2 ≈ -2\nroot: 1 ≈ 1 (multiplicity 2)\n");

    assert_eq!(cli(&["trisect", "2"]).code, EXIT_EVAL);
    assert_eq!(cli(&["solve-cubic", "0", "two"]).code, EXIT_USAGE);
}

#[test]
fn classifier_commands() {
    assert_eq!(cli(&["ngon", "11"]).stdout, "not constructible: 11 − 1 = 2·5\n");
    assert!(cli(&["ngon", "17"]).stdout.starts_with("constructible: 17 = 17; 17 − 1 = 2^4"));
    assert_eq!(cli(&["ngon", "2"]).code, EXIT_EVAL);
    assert!(cli(&["classify", "thalian", "0", "2"]).stdout.starts_with("non-Thalian"));
    assert!(cli(&["classify", "unity", "12"]).stdout.contains(": Thalian"));
    let out = cli(&["classify", "totally-real", "2", "2", "2"]);
    assert!(out.stdout.starts_with("not totally real; conjugate 2 - 2 * sqrt(2) is negative"), "{}", out.stdout);
    assert!(cli(&["classify", "degree", "1", "0", "0", "1", "1"]).stdout.contains("necessary only"));
    assert_eq!(cli(&["classify", "degree", "1", "0", "-1"]).code, EXIT_EVAL);
}

#[test]
fn conic_commands() {
    assert_eq!(cli(&["dual", "1/2", "0", "0", "0", "-1", "0"]).stdout.lines().next(), Some("dual: u^2 - 2*v = 0"));
    let out = cli(&["tangents", "1", "0", "0", "0", "-1", "0", "1", "0", "1", "-2", "-2", "1", "--digits", "5"]);
    assert!(out.stdout.contains("tangent: y ≈ 0 x + 0  exact <0, 1, 0>"), "{}", out.stdout);
    let out = cli(&["tangents", "1/2", "0", "0", "0", "-1", "0", "0", "0", "1", "-1/4", "3/4", "9/64"]);
    assert_eq!(out.stdout.lines().count(), 4);
    assert!(out.stdout.ends_with("tangent: line at infinity\n"));
}

#[test]
fn delian_trace_has_one_fold_of_the_sixth_kind() {
    let path = scratch("delian.json");
    let out = cli(&["run", &corpus("delian.ori"), "--trace", &path]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let json = fs::read_to_string(&path).unwrap();
    assert_eq!(json.matches("\"op\": \"O6\"").count() + json.matches("\"op\":\"O6\"").count(), 1, "{json}");
}

#[test]
fn ninegon_figure() {
    let path = scratch("ninegon.svg");
    let out = cli(&["run", &corpus("ninegon.ori"), "--svg", &path, "--viewport", "-2,-2,2,2"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let svg = fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("<line ").count(), 5);
    for t in ["t1", "t2", "t3"] {
        assert!(svg.contains(&format!(">{t}</text>")));
    }
    let order: Vec<usize> = ["id=\"conics\"", "id=\"lines\"", "id=\"points\"", "id=\"labels\""]
        .iter()
        .map(|g| svg.find(g).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn viewport_errors() {
    let path = scratch("empty.svg");
    let out = cli(&["run", &corpus("sqrt2.ori"), "--svg", &path, "--viewport", "1,0,1,2"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("viewport is empty"));
    assert_eq!(cli(&["run", &corpus("sqrt2.ori"), "--viewport", "1,2,3"]).code, EXIT_USAGE);
}
