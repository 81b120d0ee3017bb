use std::process::{Command, Output};

use horopack::catalog::load_catalog_from_str;
use horopack::cli::{self, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};

fn horopack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horopack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("horopack").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn list_csv_has_header_and_23_rows() {
    let o = horopack(&["list", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 24);
    assert_eq!(lines[0], "witt,symbol,schlafli,class,n_ideal,volume,value");
    let y3 = lines.iter().find(|l| l.starts_with("Y3,")).unwrap();
    assert!(y3.contains("[3,6,3]"), "{y3}");
    assert!(y3.contains("(1/2)Λ(π/3)"), "{y3}");
}

#[test]
fn list_json_round_trips() {
    let (code, json, _) = run_in_process(&["list", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let catalog = load_catalog_from_str(&json).unwrap();
    assert_eq!(catalog.entries.len(), 23);
    assert_eq!(catalog.to_json() + "\n", json);
}

#[test]
fn list_table_is_aligned() {
    use unicode_width::UnicodeWidthStr;
    let (_, table, _) = run_in_process(&["list"]);
    assert_eq!(table.lines().count(), 25);
    // Combining marks in the symbols must not shift the last column.
    let starts: Vec<usize> = table
        .lines()
        .map(|l| {
            let (head, _) = l.rsplit_once(' ').unwrap();
            head.width() + 1
        })
        .collect();
    assert!(starts.iter().all(|&s| s == starts[0]), "{starts:?}");
}

#[test]
fn density_reports_theta_and_nonarithmetic_values() {
    let (code, text, _) = run_in_process(&["density", "V3"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("0.853276088"), "{text}");
    let (code, text, _) = run_in_process(&["density", "HP3"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("0.550841"), "{text}");
}

#[test]
fn density_csv_lists_every_anchor() {
    let (code, text, _) = run_in_process(&["density", "Y3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "anchor,vertex,s,piece_volume,ratio,density");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].contains(",3/4,"));
}

#[test]
fn unknown_symbol_is_a_usage_error() {
    let o = horopack(&["density", "BOGUS"]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BOGUS"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(run_in_process(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(
        run_in_process(&["verify", "--oracle", "maybe"]).0,
        EXIT_USAGE
    );
    assert_eq!(run_in_process(&["list", "--format", "xml"]).0, EXIT_USAGE);
    assert_eq!(run_in_process(&["--help"]).0, EXIT_OK);
}

#[test]
fn missing_catalog_file_is_a_usage_error() {
    let (code, _, err) = run_in_process(&["--catalog", "/nonexistent/catalog.json", "list"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn catalog_override_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    let (_, json, _) = run_in_process(&["list", "--format", "json"]);
    std::fs::write(&path, &json).unwrap();
    let p = path.to_str().unwrap();
    let (code, text, _) = run_in_process(&["--catalog", p, "density", "V3"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("0.853276088"));

    let tampered = json.replacen("\"sqrt(3)/6\"", "\"sqrt(3)/6+0.001\"", 1);
    std::fs::write(&path, tampered).unwrap();
    let (code, _, err) = run_in_process(&["--catalog", p, "list"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("V3"), "{err}");
}

#[test]
fn verify_default_run_is_all_ok() {
    let o = horopack(&["verify", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "witt,class,n_ideal,density,paper_density,residual,status,ratios"
    );
    assert_eq!(lines.len(), 24);
    assert!(lines[1..]
        .iter()
        .all(|l| l.contains(",OK,") || l.contains(",FLAGGED,")));
    let vv = lines.iter().find(|l| l.starts_with("VVhat3,")).unwrap();
    assert!(vv.contains(",FLAGGED,"));
    let y3 = lines.iter().find(|l| l.starts_with("Y3,")).unwrap();
    assert!(y3.ends_with(",3/4|1/4"), "{y3}");
}

#[test]
fn tight_tolerance_reports_mismatches() {
    let (code, text, _) = run_in_process(&["verify", "--tolerance", "1e-12", "--samples", "0"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(text.contains("MISMATCH"));
}

#[test]
fn oracle_adds_volume_residuals() {
    let (code, text, _) = run_in_process(&["verify", "--oracle", "on", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let volumes = v["volumes"].as_array().unwrap();
    assert_eq!(volumes.len(), 23);
    for row in volumes {
        assert!(row["residual"].as_f64().unwrap() < 1e-5, "{row}");
    }
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 4);
    assert_eq!(v["rows"].as_array().unwrap().len(), 23);
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        &["verify", "--format", "csv", "--seed", "3"][..],
        &["verify", "--format", "json", "--jobs", "2"][..],
        &["density", "RRhat3", "--format", "json"][..],
        &["list", "--format", "csv"][..],
    ] {
        let a = horopack(args);
        let b = horopack(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // The thread count does not change the result.
    let one = horopack(&["verify", "--format", "csv", "--jobs", "1"]);
    let four = horopack(&["verify", "--format", "csv", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
}
