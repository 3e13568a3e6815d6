use std::path::PathBuf;
use std::process::Command;

use psi_bounds::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_psi-bounds"))
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&p).unwrap()
}

fn call(args: &[&str]) -> (u8, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("psi-bounds").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn binary_matches_goldens() {
    let cases: &[(&[&str], &str)] = &[
        (&["eval", "trigamma", "1"], "eval_trigamma_1.txt"),
        (
            &[
                "scan",
                "TRIGAMMA_HM",
                "--zmin",
                "0.5",
                "--zmax",
                "2",
                "--points",
                "5",
            ],
            "scan_trigamma_hm.csv",
        ),
        (
            &[
                "scan",
                "TRIGAMMA_HM",
                "--zmin",
                "0.5",
                "--zmax",
                "2",
                "--points",
                "5",
                "--format",
                "json",
            ],
            "scan_trigamma_hm.json",
        ),
        (
            &[
                "certify",
                "TRIGAMMA_HM",
                "--lo",
                "2",
                "--hi",
                "3",
                "--exclusion",
                "0",
                "--max-depth",
                "40",
            ],
            "certify_trigamma_hm.txt",
        ),
    ];
    for (args, name) in cases {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            golden(name),
            "{args:?}"
        );
    }
}

#[test]
fn eval_functions() {
    for f in ["gamma", "digamma", "trigamma", "psi2", "psi3"] {
        let (code, out, _) = call(&["eval", f, "2.5"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.trim().parse::<f64>().unwrap().is_finite());
    }
    let (_, out, _) = call(&["eval", "gamma", "5"]);
    let g = out.trim().parse::<f64>().unwrap();
    assert!((g - 24.0).abs() <= 1e-13 * 24.0);
}

#[test]
fn usage_and_domain_errors() {
    let cases: &[&[&str]] = &[
        &["eval", "trigamma", "-1"],
        &["eval", "trigamma", "0"],
        &["eval", "zeta", "2"],
        &["scan", "NOSUCH"],
        &["scan", "TRIGAMMA_HM", "--zmin", "2", "--zmax", "1"],
        &["scan", "TRIGAMMA_HM", "--points", "1"],
        &["scan", "TRIGAMMA_HM", "--tolerance", "-1"],
        &["scan", "TRIGAMMA_HM", "--format", "text"],
        &[
            "certify",
            "TRIGAMMA_HM",
            "--lo",
            "0.5",
            "--hi",
            "2",
            "--exclusion",
            "0",
        ],
        &["certify", "GAMMA_HM", "--lo", "0.5", "--hi", "2"],
        &["report"],
        &[],
    ];
    for args in cases {
        let (code, out, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?} wrote to stdout");
        assert!(!err.is_empty(), "{args:?} gave no diagnostic");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("certify"));
}

#[test]
fn scan_csv_and_json_agree() {
    let base = [
        "scan", "GA_GAP", "--zmin", "0.01", "--zmax", "100", "--points", "40",
    ];
    let (c1, csv, _) = call(&base);
    let (c2, json, _) = call(&[&base[..], &["--format", "json"]].concat());
    assert_eq!((c1, c2), (EXIT_PASS, EXIT_PASS));
    let doc: Value = serde_json::from_str(&json).unwrap();
    let records = doc["records"].as_array().unwrap();
    let rows: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        let cols: Vec<&str> = row.split(',').collect();
        for (i, key) in [(1, "z"), (2, "lhs"), (3, "rhs"), (4, "margin")] {
            assert_eq!(
                cols[i].parse::<f64>().unwrap(),
                rec[key].as_f64().unwrap(),
                "{key} in {row}"
            );
        }
        assert_eq!(cols[5], rec["status"].as_str().unwrap());
    }
    assert_eq!(doc["summary"]["status"], "pass");
    assert!(csv.lines().last().unwrap().contains("status=pass"));
}

#[test]
fn failing_scan_exits_one() {
    let (code, out, _) = call(&[
        "--inject-fault",
        "psi2-sign",
        "scan",
        "Z_PSI2_INCREASING",
        "--points",
        "200",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.lines().last().unwrap().contains("status=fail"));
}

#[test]
fn certify_formats() {
    let args = ["certify", "PHI_NONNEG", "--lo", "0.1", "--hi", "10"];
    let (code, text, _) = call(&args);
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("status: Proven"));
    let (code, json, _) = call(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(code, EXIT_PASS);
    let doc: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["claim"], "PHI_NONNEG");
    assert_eq!(doc["certificate"]["status"], "Proven");
    assert!(doc["certificate"]["min_margin"].as_f64().unwrap() > 0.0);
    let (code, csv, _) = call(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(code, EXIT_PASS);
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn report_formats_agree() {
    let (c1, json, _) = call(&["report", "--all"]);
    let (c2, csv, _) = call(&["report", "--all", "--format", "csv"]);
    assert_eq!((c1, c2), (EXIT_PASS, EXIT_PASS));
    let doc: Value = serde_json::from_str(&json).unwrap();
    let entries = doc["records"].as_array().unwrap();
    assert_eq!(entries.len(), 18);
    assert_eq!(doc["summary"]["passed"], 18);
    let rows: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), 18);
    assert!(csv
        .lines()
        .last()
        .unwrap()
        .contains("failed=0 failed_claims= status=pass"));
    for (row, e) in rows.iter().zip(entries) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], e["claim"].as_str().unwrap());
        assert_eq!(cols[1], "pass");
    }
    let (code, subset, _) = call(&["report", "TRIGAMMA_HM", "KERNEL_B_BOUNDS"]);
    assert_eq!(code, EXIT_PASS);
    let doc: Value = serde_json::from_str(&subset).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 2);
}

#[test]
fn injected_fault_fails_report() {
    let out = bin()
        .args(["--inject-fault", "psi2-sign", "report", "--all"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["outcome"] != "pass")
        .map(|e| e["claim"].as_str().unwrap())
        .collect();
    for claim in ["Z_PSI2_INCREASING", "GG_SLOPE_INCREASING", "F_DECREASING"] {
        assert!(failed.contains(&claim), "{claim} not flagged: {failed:?}");
    }
}
