use std::fs;
use std::process::{Command, Output};

use ndoppe_core::fitting::{FitResult, ModelKind, NbShape};
use ndoppe_core::fixtures::fixture;
use ndoppe_core::report::fit_models;

fn ndoppe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndoppe"))
        .args(args)
        .env_remove("NDOPPE_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ndoppe(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = ndoppe(args);
    assert!(!out.status.success(), "{args:?} succeeded");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate",
        "aggregate",
        "--model",
        "ndoppe",
        "--coeffs",
        "1,1",
        "--theta",
        "0.4",
        "--gamma",
        "2",
        "--seed",
        "7",
        "--n",
        "1000",
    ];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    assert_eq!(first, stdout(&sequential));
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    for key in ["mean", "variance", "zero_share"] {
        assert!(doc["summary"][key].is_f64(), "{key}");
    }
}

#[test]
fn zero_replicates_rejected() {
    let err = fails(&["simulate", "count", "--model", "poisson", "--alpha", "1", "--n", "0"]);
    assert!(err.contains("replicate"), "{err}");
}

#[test]
fn negative_coefficients_rejected() {
    let err = fails(&["fit", "--fixture", "table1", "--coeffs", "-1"]);
    assert!(err.contains("negative"), "{err}");
}

#[test]
fn compound_values() {
    assert_eq!(
        stdout(&["compound", "mean", "--model", "poisson", "--alpha", "2", "--gamma", "4"]),
        "0.5000000\n"
    );
    let model = ["--model", "ndoppe", "--coeffs", "1,1", "--theta", "0.5", "--gamma", "1"];
    let with = |extra: &[&str]| {
        let mut args = vec!["compound"];
        args.extend_from_slice(&extra[..1]);
        args.extend_from_slice(&model);
        args.extend_from_slice(&extra[1..]);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&[&args[..], &["--json"]].concat())).unwrap();
        doc["value"].as_f64().unwrap()
    };
    let mean = with(&["mean"]);
    let premium = with(&["premium", "--retention", "0"]);
    assert!((premium - mean).abs() < 1e-7, "{premium} vs {mean}");
    // atom for a=[1,1]: θ/(1+θ) · θ + 1/(1+θ) · θ²
    let atom = with(&["pdf", "--x", "0"]);
    assert!((atom - (0.25 / 1.5 + 0.25 / 1.5)).abs() < 1e-15, "{atom}");
    let err = fails(&[
        "compound", "pdf", "--model", "ndoppe", "--theta", "0.5", "--gamma", "1", "--x", "1",
    ]);
    assert!(err.contains("--coeffs"), "{err}");
}

#[test]
fn fit_json_round_trips() {
    let out = stdout(&["fit", "--fixture", "table5", "--format", "json"]);
    let parsed: Vec<FitResult> = serde_json::from_str(&out).unwrap();
    let f = fixture("table5").unwrap();
    let expected = fit_models(&f.dataset(), &ModelKind::ALL, &f.coefficients(), NbShape::default()).unwrap();
    assert_eq!(parsed, expected);
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", out);
}

#[test]
fn fit_reads_csv_and_writes_to_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("claims.csv");
    fs::write(&input, "# policy counts\ncount,frequency\n0,50\n1,20\n2,6\n3,0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ndoppe"))
        .args([
            "fit",
            "--input",
            input.to_str().unwrap(),
            "--format",
            "csv",
            "--output",
            "fits/out.csv",
        ])
        .env("NDOPPE_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("fits/out.csv")).unwrap();
    assert!(csv.starts_with("count,observed,poisson,negbin,ndoppe\n"), "{csv}");
    assert_eq!(csv.lines().count(), 1 + 4 + 2);
}

#[test]
fn header_only_file_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.csv");
    fs::write(&input, "count,frequency\n").unwrap();
    let err = fails(&["fit", "--input", input.to_str().unwrap()]);
    assert!(err.contains("no observations"), "{err}");
}

#[test]
fn bad_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dup.csv");
    fs::write(&input, "count,frequency\n0,5\n0,3\n").unwrap();
    let err = fails(&["fit", "--input", input.to_str().unwrap()]);
    assert!(err.contains("duplicate"), "{err}");
    fs::write(&input, "count,frequency\n0,5\n1,-2\n").unwrap();
    let err = fails(&["fit", "--input", input.to_str().unwrap()]);
    assert!(err.contains("line 3"), "{err}");
    fails(&["fit"]);
    fails(&["fit", "--fixture", "table1", "--input", "x.csv"]);
}

#[test]
fn report_covers_all_tables() {
    let out = stdout(&["report", "--format", "csv"]);
    for i in 1..=8 {
        assert!(out.contains(&format!("\ntable{i},0,")), "table{i}");
    }
    let text = stdout(&["report"]);
    assert!(text.contains("relative error against published values"));
}
