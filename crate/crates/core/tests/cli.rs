use std::process::{Command, Output};

use radial_dichotomy::cli::{self, headers, parse_config, Cell, OutputFormat};
use radial_dichotomy::exponents;
use radial_dichotomy::Dimension;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial-dichotomy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn exponents_table_over_a_range() {
    let out = bin(&["exponents", "--dimension-range", "2..12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("n,lambda_plus,lambda_minus,gap\n"));
    assert!(!text.contains('\r'));
    let rows = rows(&out);
    assert_eq!(rows.len(), 11);
    let ten = rows.iter().find(|r| r[0] == "10").unwrap();
    assert_eq!(ten[1].parse::<f64>().unwrap(), 0.0);
    for r in &rows {
        let n = Dimension::new(r[0].parse().unwrap()).unwrap();
        assert_eq!(r[1].parse::<f64>().unwrap(), exponents(n).lambda_plus);
    }
}

#[test]
fn family_flips_at_the_bracketing_samples() {
    let out = bin(&[
        "family",
        "--dimension",
        "3",
        "--alpha-range",
        "-3..3",
        "--steps",
        "61",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 61);
    let e = exponents(Dimension::new(3).unwrap());
    let flips: Vec<(f64, f64)> = rows
        .windows(2)
        .filter(|w| w[0][1] != w[1][1])
        .map(|w| (w[0][0].parse().unwrap(), w[1][0].parse().unwrap()))
        .collect();
    assert_eq!(flips.len(), 2);
    assert!(flips[0].0 < e.lambda_minus && e.lambda_minus <= flips[0].1);
    assert!(flips[1].0 < e.lambda_plus && e.lambda_plus <= flips[1].1);
    // stable rows carry matching side and class
    for r in rows.iter().filter(|r| r[1] == "true") {
        let pair = (r[2].as_str(), r[3].as_str());
        assert!(pair == ("HL", "Large") || pair == ("HS", "Small"), "{r:?}");
    }
}

#[test]
fn exit_codes() {
    let out = bin(&["solve", "--dimension", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dimension") && err.contains("N >= 2"), "{err}");
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["solve", "--colour", "red"]).status.code(), Some(1));
    let out = bin(&[
        "solve",
        "--nonlinearity",
        "power-family(-1)",
        "--dimension",
        "2",
        "--u1",
        "10",
        "--du1",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blew up"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# exponents for a range\ncommand = exponents\ndimension_range = 2..4\nformat = json\n",
    )
    .unwrap();
    let out = bin(&[
        "--config",
        path.to_str().unwrap(),
        "--dimension-range",
        "9..10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["n"], 10);
    assert_eq!(rows[1]["lambda_plus"].as_f64(), Some(0.0));

    std::fs::write(&path, "command = exponents\nunknown_key = 3\n").unwrap();
    let out = bin(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 2") && err.contains("unknown_key"),
        "{err}"
    );
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = bin(&[
            "sweep",
            "--dimension-range",
            "3..5",
            "--alpha-range",
            "-4..3",
            "--steps",
            "8",
            "--horizon",
            "2000",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with(&headers::SWEEP.join(",")));
    assert_eq!(text.lines().count(), 1 + 3 * 8);
}

#[test]
fn every_command_emits_its_documented_header() {
    let check = cli::schema_check();
    assert!(check.passed, "{}", check.detail);
}

#[test]
fn seeded_pencil_consistency() {
    for seed in [0, 1, 42] {
        let check = cli::pencil_check(seed);
        assert!(check.passed, "{}", check.detail);
    }
}

#[test]
fn classify_a_solved_profile() {
    let cfg = parse_config(
        &args(&[
            "classify",
            "--nonlinearity",
            "lane-emden(5)",
            "--u1",
            "0.9306048591020996",
            "--du1",
            "-0.4653024295510498",
        ]),
        None,
    )
    .unwrap();
    let table = cli::execute(&cfg).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0][1], Cell::text("Small"));
    assert_eq!(table.rows[0][8], Cell::text("HS"));
    let json = table.render(OutputFormat::Json);
    assert!(json.contains("\"verdict\": \"Small\""));
}

#[test]
fn solve_defaults_to_family_initial_data() {
    let cfg = parse_config(
        &args(&[
            "solve",
            "--alpha",
            "2",
            "--dimension",
            "4",
            "--horizon",
            "10",
            "--grid-points",
            "11",
        ]),
        None,
    )
    .unwrap();
    let table = cli::execute(&cfg).unwrap();
    assert_eq!(table.rows.len(), 11);
    let Cell::Real(u_end) = table.rows[10][1] else {
        panic!("real cell")
    };
    assert!((u_end - 100.0).abs() < 1e-6, "{u_end}");
    let missing = parse_config(
        &args(&["solve", "--nonlinearity", "exponential", "--u1", "0"]),
        None,
    )
    .unwrap();
    let err = cli::execute(&missing).unwrap_err();
    assert_eq!(err.exit_code(), cli::EXIT_VALIDATION);
    assert!(err.to_string().contains("du1"));
}

#[test]
fn stability_trace_rows() {
    let cfg = parse_config(
        &args(&[
            "stability",
            "--alpha",
            "1",
            "--horizon",
            "1000",
            "--eigen-dofs",
            "200",
        ]),
        None,
    )
    .unwrap();
    let table = cli::execute(&cfg).unwrap();
    let scan: Vec<f64> = table
        .rows
        .iter()
        .filter(|r| r[0] == Cell::text("scan"))
        .map(|r| match r[3] {
            Cell::Real(x) => x,
            _ => panic!("real cell"),
        })
        .collect();
    assert!(scan.windows(2).all(|w| w[1] <= w[0]));
    assert!(*scan.last().unwrap() < 0.0);
    assert!(table.rows.iter().any(|r| r[0] == Cell::text("side")));
    assert!(
        table.notes[0].starts_with("status: Unstable"),
        "{:?}",
        table.notes
    );
}
