use std::process::Command;

use strong132_cli::run;

fn run_ok(args: &[&str]) -> String {
    let mut out = Vec::new();
    let mut full = vec!["strong132"];
    full.extend_from_slice(args);
    let status = run(full, &mut out).unwrap();
    assert_eq!(status, 0, "{args:?}");
    String::from_utf8(out).unwrap()
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_strong132"));
    cmd.env_remove("STRONG132_CACHE_DIR");
    cmd
}

#[test]
fn table_tsv_total_row() {
    let tsv = run_ok(&["table", "--n-max", "8", "--format", "tsv"]);
    let total: Vec<&str> = tsv.lines().last().unwrap().split('\t').collect();
    assert_eq!(total[0], "Total");
    assert_eq!(total[7], "101");
    assert!(tsv.starts_with("k\\n\t1\t2\t3"));
}

#[test]
fn table_other_formats() {
    let bfile = run_ok(&["table", "--n-max", "5", "--format", "bfile"]);
    assert_eq!(bfile, "1 1\n2 2\n3 5\n4 12\n5 24\n");
    let json: serde_json::Value =
        serde_json::from_str(&run_ok(&["table", "--n-max", "3", "--format", "json"])).unwrap();
    let records = json.as_array().unwrap();
    assert_eq!(records.len(), 6);
    assert_eq!(records[5], serde_json::json!({"n": 3, "k": 3, "count": 2}));
    let text = run_ok(&["table", "--n-max", "4", "--format", "text"]);
    assert!(text.lines().last().unwrap().starts_with("Total"));
}

#[test]
fn series_outputs() {
    assert_eq!(
        run_ok(&["series", "--gf", "sav132", "--order", "0", "--format", "bfile"]),
        "0 1\n"
    );
    let b = run_ok(&["series", "--gf", "sav312", "--order", "5"]);
    assert_eq!(b, "0 1\n1 1\n2 2\n3 4\n4 9\n5 19\n");
    let json: serde_json::Value = serde_json::from_str(&run_ok(&[
        "series", "--gf", "a_ge4", "--order", "6", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["name"], "a_ge4");
    assert_eq!(json["coeffs"], serde_json::json!([0, 0, 0, 0, 2, 4, 2]));
    let text = run_ok(&["series", "--gf", "d", "--order", "4", "--format", "text"]);
    assert_eq!(text, "d: 1, 1, 2, 3, 6\n");
}

#[test]
fn construct_output() {
    let text = run_ok(&["construct", "--n", "12", "--b", "7", "--alpha", "2 1"]);
    assert!(text.contains("variant=form2"));
    assert!(text.contains("one-line: 7 6 8 9 10 11 12 2 1 3 4 5\n"));
    assert!(text.contains("cycle of n: length 12"));
    assert!(text.contains("strongly avoids 132: yes"));
    let inv = run_ok(&[
        "construct",
        "--n",
        "12",
        "--b",
        "11",
        "--variant",
        "form1",
        "--alpha",
        "1",
        "--inverse",
    ]);
    assert!(inv.contains("one-line: 12 1 2 3 4 5 6 7 8 9 10 11\n"));
    let json: serde_json::Value = serde_json::from_str(&run_ok(&[
        "construct",
        "--n",
        "12",
        "--b",
        "9",
        "--alpha",
        "1,2,3",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["cycles"], "(1,4,7,10)(2,5,8,11)(3,6,9,12)");
}

#[test]
fn asym_output() {
    let text = run_ok(&["asym", "--n-max", "20"]);
    assert!(text.starts_with("K = 2.77826"));
    assert!(text.contains("a_n < 2^n for 1 <= n <= 20"));
    let json: serde_json::Value =
        serde_json::from_str(&run_ok(&["asym", "--n-max", "16", "--format", "json"])).unwrap();
    assert_eq!(json["ratios"].as_array().unwrap().len(), 16);
}

#[test]
fn argument_errors() {
    let mut sink = Vec::new();
    assert!(run(["strong132", "table", "--n-max", "16"], &mut sink).is_err());
    assert!(run(["strong132", "table", "--bogus"], &mut sink).is_err());
    assert!(run(
        ["strong132", "verify", "--n-max", "10", "--order", "5"],
        &mut sink
    )
    .is_err());
    assert!(run(["strong132", "series", "--gf", "nope"], &mut sink).is_err());
    assert!(run(
        ["strong132", "series", "--gf", "b", "--format", "tsv"],
        &mut sink
    )
    .is_err());
    assert!(run(
        [
            "strong132",
            "construct",
            "--n",
            "12",
            "--b",
            "6",
            "--alpha",
            "1"
        ],
        &mut sink
    )
    .is_err());
    assert!(run(
        [
            "strong132",
            "construct",
            "--n",
            "12",
            "--b",
            "9",
            "--alpha",
            "1 3 2"
        ],
        &mut sink
    )
    .is_err());
    assert!(sink.is_empty());
}

#[test]
fn binary_exit_codes() {
    let ok = binary().args(["verify", "--n-max", "6"]).output().unwrap();
    assert!(ok.status.success());
    let usage = binary().args(["table", "--nope"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
    let guard = binary().args(["table", "--n-max", "16"]).output().unwrap();
    assert!(!guard.status.success());
    assert!(String::from_utf8_lossy(&guard.stderr).contains("refuses n = 16"));
}

#[test]
fn deterministic_across_runs_and_workers() {
    let a = run_ok(&["table", "--n-max", "11", "--format", "json"]);
    let b = run_ok(&["table", "--n-max", "11", "--format", "json", "--jobs", "3"]);
    assert_eq!(a, b);
    let v1 = run_ok(&["verify", "--n-max", "9"]);
    let v2 = run_ok(&["verify", "--n-max", "9", "--jobs", "4"]);
    assert_eq!(v1, v2);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let fresh = run_ok(&["table", "--n-max", "10"]);
    let first = run_ok(&["table", "--n-max", "10", "--cache-dir", path]);
    assert_eq!(fresh, first);
    assert!(dir.path().join("column-010.json").exists());
    let reloaded = run_ok(&["table", "--n-max", "10", "--cache-dir", path]);
    assert_eq!(fresh, reloaded);

    let env_run = binary()
        .args(["table", "--n-max", "10"])
        .env("STRONG132_CACHE_DIR", path)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env_run.stdout).unwrap(), fresh);
}

#[test]
fn verify_reports_tampered_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    run_ok(&["table", "--n-max", "7", "--cache-dir", path]);
    let file = dir.path().join("column-007.json");
    let text = std::fs::read_to_string(&file).unwrap().replace("28", "29");
    std::fs::write(&file, text).unwrap();
    let out = binary()
        .args(["verify", "--n-max", "7", "--cache-dir", path])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("first failure: totals_vs_sav132 n=7 expected=101 got=102"),
        "{stdout}"
    );
}
