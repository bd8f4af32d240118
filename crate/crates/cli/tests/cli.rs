use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn grs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &std::path::Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

/// Number printed after `key` on the line starting with `key`.
fn reported(out: &str, key: &str) -> f64 {
    let line = out.lines().find(|l| l.trim_start().starts_with(key)).unwrap_or_else(|| panic!("no {key} in {out}"));
    line.trim_start()[key.len()..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn catalog_check_passes_for_warped_smooth() {
    let o = grs(&["catalog", "check", "--id", "warped-smooth", "--E", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("max residual")).unwrap();
    assert!(line.ends_with("< 1e-8"), "{line}");
}

#[test]
fn catalog_check_csv_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("res.csv");
    let o = grs(&[
        "catalog",
        "check",
        "--id",
        "bryant5-smooth",
        "--E",
        "1/2",
        "--points",
        "40",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&path);
    assert_eq!(rows.len(), 40);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let max_over = |name: &str| rows.iter().map(|r| r[col(name)].parse::<f64>().unwrap()).fold(0.0, f64::max);
    let out = stdout(&o);
    for (key, name) in
        [("res3 (second-order equations)", "res3"), ("|H|", "H"), ("res7 (first-order constraint)", "res7")]
    {
        let printed = reported(&out, key);
        let derived = max_over(name);
        assert!((printed - derived).abs() <= 1e-3 * derived.abs().max(1e-300), "{name}: {printed} vs {derived}");
    }
}

#[test]
fn superpotential_verify_reports_empty_residual() {
    for name in ["bryant4.toml", "warped22.toml", "circle.toml"] {
        let o = grs(&["superpotential", "verify", "--orbit", &config(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("residual: empty"));
    }
}

#[test]
fn wrong_coefficient_fails_with_first_term() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("bryant4.toml")).unwrap().replace("coeff = \"2*s\"", "coeff = \"3*s\"");
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let o = grs(&["superpotential", "verify", "--orbit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first at exponent (3, -2): 6"), "{}", stdout(&o));
}

#[test]
fn darboux_cofactors_for_n_four() {
    let o = grs(&["darboux", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("X(J1) = g J1 with g = 2x"), "{out}");
    assert!(out.contains("X(J2) = g J2 with g = 4x - y"), "{out}");
    let o = grs(&["darboux", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g = 2x"));
}

#[test]
fn search_finds_and_refutes() {
    let o = grs(&["superpotential", "search", "--orbit", &config("bryant4.toml")]);
    let out = stdout(&o);
    assert!(out.contains("f = 2*s*exp(2*q - u) + 12*s^-1*exp(q - u)"), "{out}");
    let o = grs(&["superpotential", "search", "--orbit", &config("warped33.toml")]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("NoSolutionFound") && out.contains("hull vertices"), "{out}");
}

#[test]
fn integral_recursion_and_drift() {
    let o = grs(&["integral", "recursion", "--orbit", &config("circle.toml")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("F = (p + phi)*exp(u)"));
    let o = grs(&["integral", "recursion", "--orbit", &config("bryant4.toml"), "--seed-level", "-3,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Phi = 0"));
    let o = grs(&["integral", "recursion", "--orbit", &config("bryant4.toml"), "--seed-level", "-2,1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = grs(&["integral", "drift", "--orbit", &config("bryant4.toml"), "--id", "bryant5-smooth", "--integrate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("< 1e-7"));
}

#[test]
fn canonical_run_keeps_constraint_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flow.csv");
    let o = grs(&[
        "canonical",
        "integrate",
        "--id",
        "warped-smooth",
        "--tspan",
        "1:6",
        "--tol",
        "1e-10",
        "--points",
        "26",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, ["t", "q1", "q2", "u", "p1", "p2", "phi", "H"]);
    assert_eq!(rows.len(), 26);
    let hmax = rows.iter().map(|r| r[7].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(hmax < 1e-8);
    let printed = reported(&stdout(&o), "max |H| =");
    assert!((hmax - printed).abs() <= 1e-3 * printed, "{hmax} vs {printed}");
}

#[test]
fn subsystem_tracks_closed_form() {
    let o = grs(&[
        "subsystem",
        "integrate",
        "--orbit",
        &config("warped22.toml"),
        "--id",
        "warped-smooth",
        "--tspan",
        "0.5:5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(reported(&stdout(&o), "max gap to warped-smooth =") < 1e-6);
}

#[test]
fn smoothness_verdicts() {
    let o = grs(&["smoothness", "--id", "warped-smooth", "--E", "4", "--expect", "smooth"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = grs(&["smoothness", "--id", "bryant5-posmu", "--expect", "smooth"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: Blowup"));
}

#[test]
fn orbit_validate_prints_form() {
    let o = grs(&["orbit", "validate", "--orbit", &config("warped22.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("signature: 1 positive, 2 negative, 0 zero"));
    assert!(out.contains("J(d, d) = 1"));
}

#[test]
fn usage_errors_exit_two() {
    let o = grs(&["catalog", "check", "--id", "warped-smooth", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--bogus"));
    let o = grs(&["catalog", "check", "--id", "warped-smooth", "--E", "one"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--E"));
    let o = grs(&["orbit", "validate", "--orbit", "/nonexistent/orbit.toml"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.toml");
    std::fs::write(&path, "[orbit]\nd = [4]\nextra = 1\n").unwrap();
    let o = grs(&["orbit", "validate", "--orbit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("extra"));
}

#[test]
fn output_is_deterministic() {
    let args = ["canonical", "integrate", "--id", "bryant5-smooth", "--tspan", "0.5:3"];
    assert_eq!(stdout(&grs(&args)), stdout(&grs(&args)));
}
