use std::path::{Path, PathBuf};
use std::process::Command;

use specrig::exact::Point;
use specrig::global::{analyze, AnalysisOptions, TheoremStatus};
use specrig::io::{parse_problem, render_text, run_analysis, ReportDocument};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.problem"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_specrig"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn table_row<'a>(text: &'a str, pole: &str) -> Vec<&'a str> {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .find(|c| c.first() == Some(&pole))
        .expect("pole row")
}

fn analyze_file(name: &str) -> (i32, String) {
    let p = corpus(name);
    let (code, out, _) = run(&["analyze", p.to_str().unwrap()]);
    (code, out)
}

#[test]
fn airy_exits_zero() {
    let (code, out) = analyze_file("airy");
    assert_eq!(code, 0);
    let d = ReportDocument::from_json(&out).unwrap();
    let g = d.global.unwrap();
    assert_eq!((g.rigidity, g.euler_char), (2, 2));
    assert_eq!(g.main_theorem.status, "true");
}

#[test]
fn bessel_exits_two_with_diagnostic() {
    let (code, out) = analyze_file("bessel");
    assert_eq!(code, 2);
    let d = ReportDocument::from_json(&out).unwrap();
    assert!(d.pole("0/1").is_none());
    assert!(d
        .diagnostics
        .iter()
        .any(|e| e.pole.as_deref() == Some("0/1") && e.kind == "assumption-violation"));
    assert!(d.global.is_none());
}

#[test]
fn reducible_fuchsian_is_not_applicable_and_exits_zero() {
    let (code, out) = analyze_file("fuchsian");
    assert_eq!(code, 0);
    let d = ReportDocument::from_json(&out).unwrap();
    assert_eq!(d.global.unwrap().main_theorem.status, "not-applicable");
    assert!(d.poles.iter().all(|p| p.checks.milnor_ok == Some(true)));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.problem");
    std::fs::write(&bad, "rank: 1\npoles: 0, 0\nmatrix:\n  1/z\n").unwrap();
    let (code, out, err) = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = run(&["analyze", dir.path().join("missing.problem").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn undeclared_pole_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("undeclared.problem");
    std::fs::write(&f, "rank: 1\npoles: 0\nmatrix:\n  1/z + 1/(z-1)\n").unwrap();
    let (code, out, _) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    let d = ReportDocument::from_json(&out).unwrap();
    assert!(!d.diagnostics.is_empty());
}

#[test]
fn failed_verdicts_give_exit_one() {
    let spec = parse_problem(&std::fs::read_to_string(corpus("airy")).unwrap()).unwrap();
    let mut r = analyze(&spec.matrix, &spec.poles, &AnalysisOptions::default()).unwrap();
    assert_eq!(r.exit_code(), 0);
    r.global.as_mut().unwrap().main_theorem.status = TheoremStatus::False;
    assert_eq!(r.exit_code(), 1);
    r.global.as_mut().unwrap().main_theorem.status = TheoremStatus::ConditionalFalse;
    assert_eq!(r.exit_code(), 1);
    r.global.as_mut().unwrap().main_theorem.status = TheoremStatus::NotApplicable;
    assert_eq!(r.exit_code(), 0);
    if let (_, Ok(p)) = &mut r.poles[0] {
        p.checks.milnor_ok = Some(false);
    }
    assert_eq!(r.exit_code(), 1);
    assert_eq!(r.poles[0].0, Point::Infinity);
}

#[test]
fn text_flag_prints_the_table() {
    let p = corpus("airy");
    let (code, out, _) = run(&["analyze", "--text", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let cols = table_row(&out, "inf");
    assert_eq!(cols[1..], ["3", "1", "3", "3", "6", "4", "2", "1", "5"]);
    assert!(!out.contains("warnings"));
}

#[test]
fn rank_one_double_pole_row() {
    let spec = parse_problem(&std::fs::read_to_string(corpus("rank1_double_pole")).unwrap()).unwrap();
    let text = render_text(&run_analysis(&spec));
    let cols = table_row(&text, "0");
    assert_eq!(cols[1..], ["2", "1", "1", "0", "0", "0", "0", "1", "2"]);
}

#[test]
fn cli_flags_reach_the_report() {
    let p = corpus("airy");
    let (_, out, _) = run(&[
        "analyze",
        "--assume-irreducible-curve",
        "--assert-irreducible-connection",
        "--check-reduction",
        "--truncation",
        "12",
        p.to_str().unwrap(),
    ]);
    let d = ReportDocument::from_json(&out).unwrap();
    assert!(d.input.flags.iter().any(|f| f == "check-reduction"));
    assert_eq!(d.poles[0].checks.reduction_agrees, Some(true));
    assert!(d.global.unwrap().cohomology.is_some());
}

#[test]
fn identical_input_gives_identical_bytes() {
    for name in ["airy", "two_cusps", "fuchsian", "bessel"] {
        let (_, a) = analyze_file(name);
        let (_, b) = analyze_file(name);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn reports_round_trip_byte_for_byte() {
    for name in ["airy", "generalized_airy_3", "fuchsian", "bessel", "bounded_cell"] {
        let (_, out) = analyze_file(name);
        assert_eq!(ReportDocument::from_json(&out).unwrap().to_json(), out, "{name}");
    }
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("SPECRIG_UPDATE_GOLDEN").is_some();
    for name in [
        "airy",
        "generalized_airy_3",
        "generalized_airy_5",
        "fuchsian",
        "rank1_double_pole",
        "rank1_log",
    ] {
        let (_, out) = analyze_file(name);
        if update {
            std::fs::write(golden(name), &out).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(golden(name)).unwrap();
        assert_eq!(out, want, "{name} differs from its golden report");
    }
}
