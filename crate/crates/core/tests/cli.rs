use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use detboot::cli::ResultDocument;

fn detboot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detboot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_sample(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn twenty_value_sample(dir: &Path) -> String {
    let values: Vec<String> = (0..20)
        .map(|i| format!("{}", 0.3872 + (i as f64 * 7.0 % 20.0) * 0.97626))
        .collect();
    write_sample(dir, "twenty.txt", &values.join("\n"))
}

#[test]
fn density_json_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = twenty_value_sample(dir.path());
    let out = detboot(&[
        "density",
        "--input",
        &input,
        "--method",
        "custom-mixture",
        "--coeffs",
        "1,1,1,1,1",
        "--grid-size",
        "1000",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: ResultDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.command, "density");
    assert_eq!(doc.grid_size, 1000);
    assert_eq!(doc.bins.len(), 1000);
    assert!((doc.bins.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    assert_eq!(doc.method.components, 5);
    assert_eq!(doc.method.sample_size, 20);
    assert_eq!(doc.quantiles.len(), 5);
}

#[test]
fn quantile_document_round_trips_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let input = twenty_value_sample(dir.path());
    let output = dir.path().join("q.json");
    let out = detboot(&[
        "quantile",
        "--input",
        &input,
        "--method",
        "efron-mean",
        "--grid-size",
        "777",
        "--alpha",
        "0.01,0.025,0.5,0.975,0.99",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let first = ResultDocument::read(&output).unwrap();
    let text = serde_json::to_string_pretty(&first).unwrap();
    fs::write(&output, text).unwrap();
    let second = ResultDocument::read(&output).unwrap();
    for (k, v) in &first.quantiles {
        assert_eq!(second.quantiles[k].to_bits(), v.to_bits(), "alpha {k}");
    }
    assert_eq!(first, second);
}

#[test]
fn csv_has_plot_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path(), "s.txt", "1\n2\n3\n4\n5\n6\n");
    let out = detboot(&[
        "cdf",
        "--input",
        &input,
        "--method",
        "moving-block",
        "--block-length",
        "2",
        "--grid-size",
        "64",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bin_left,bin_right,density_mass,cdf"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 64);
    assert_eq!(rows.last().unwrap()[3], 1.0);
    assert!(rows
        .windows(2)
        .all(|w| w[0][1] == w[1][0] || (w[0][1] - w[1][0]).abs() < 1e-12));
}

#[test]
fn quantile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path(), "s.txt", "0\n1\n");
    let out = detboot(&[
        "quantile",
        "--input",
        &input,
        "--method",
        "custom-mixture",
        "--coeff",
        "1",
        "--m",
        "2",
        "--grid-size",
        "4",
        "--pad",
        "2",
        "--alpha",
        "0.5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().collect::<Vec<_>>(),
        ["alpha,quantile", "0.5,2.0000000000000000e0"]
    );
}

#[test]
fn compare_prints_both_distances() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path(), "s.txt", "0\n1\n2\n");
    let out = detboot(&[
        "compare",
        "--input",
        &input,
        "--method",
        "custom-mixture",
        "--coeffs",
        "1,1",
        "--grid-size",
        "60",
        "--pad",
        "1.25",
        "--replicates",
        "20000",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["ks_monte_carlo"].as_f64().unwrap() <= 0.02);
    assert!(doc["ks_brute_force"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn compare_skips_large_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let input = twenty_value_sample(dir.path());
    let out = detboot(&[
        "compare",
        "--input",
        &input,
        "--method",
        "custom-mixture",
        "--coeff",
        "1",
        "--m",
        "5",
        "--grid-size",
        "1000",
        "--replicates",
        "1000",
        "--enumeration-limit",
        "1000000",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["ks_brute_force"].is_null());
    assert_eq!(doc["outcomes"].as_f64(), Some(3.2e6));
}

#[test]
fn bench_emits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = twenty_value_sample(dir.path());
    let out = detboot(&[
        "bench",
        "--input",
        &input,
        "--method",
        "efron-mean",
        "--grid-size",
        "256,512",
        "--replicates",
        "100",
        "--repeats",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,m,N,B,t_forward,t_ifft,t_mc");
    assert!(lines[1].starts_with("20,20,256,100,"));
    assert!(lines[2].starts_with("20,20,512,100,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_sample(dir.path(), "good.txt", "1\n2\n");
    let bad = write_sample(dir.path(), "bad.txt", "1\nabc\n");

    let usage = detboot(&["density", "--input", &good]);
    assert_eq!(usage.status.code(), Some(2));
    let usage = detboot(&[
        "density",
        "--input",
        &good,
        "--method",
        "efron-mean",
        "--alpha",
        "0",
    ]);
    assert_eq!(usage.status.code(), Some(2));

    let missing = detboot(&[
        "density",
        "--input",
        "/no/such/file",
        "--method",
        "efron-mean",
    ]);
    assert_eq!(missing.status.code(), Some(1));

    let parse = detboot(&["density", "--input", &bad, "--method", "efron-mean"]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains(":2:"));

    let module = detboot(&[
        "density",
        "--input",
        &good,
        "--method",
        "moving-block",
        "--block-length",
        "3",
    ]);
    assert_eq!(module.status.code(), Some(1));
}

#[test]
fn warns_when_grid_is_coarse() {
    let dir = tempfile::tempdir().unwrap();
    let input = twenty_value_sample(dir.path());
    let out = detboot(&[
        "density",
        "--input",
        &input,
        "--method",
        "efron-mean",
        "--grid-size",
        "8",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
