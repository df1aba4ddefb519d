use std::process::{Command, Output};

use qcong::scan::ScanReport;

fn qcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcong"))
        .args(args)
        .output()
        .expect("run qcong")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn expand_rows() {
    let o = qcong(&["expand", "2^2 * 1^-3", "--terms", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().last(), Some("3:16"));

    let o = qcong(&["expand", "1^-1", "--terms", "7", "--format", "json"]);
    let v: Vec<u64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, vec![1, 1, 2, 3, 5, 7, 11]);

    let o = qcong(&[
        "expand", "1^1", "--terms", "3", "--mod", "2", "--format", "csv",
    ]);
    assert_eq!(stdout(&o), "n,value\n0,1\n1,1\n2,1\n");

    let o = qcong(&["expand", "[2,3;5]/[1,4;5]", "--terms", "6"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn expand_parse_error_points_at_column() {
    let o = qcong(&["expand", "2^2 * x"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("column 7"), "{err}");
    assert!(err.contains("      ^"), "{err}");
}

#[test]
fn verify_exit_codes() {
    let o = qcong(&[
        "verify", "--k", "3", "--prog", "5,2", "--mod", "2", "--terms", "100", "--format", "json",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["witness"]["n"], 0);
    assert_eq!(v[0]["witness"]["residue"], 1);

    let o = qcong(&[
        "verify", "--k", "4", "--prog", "2,1", "--mod", "4", "--terms", "1000",
    ]);
    assert_eq!(code(&o), 0);

    assert_eq!(
        code(&qcong(&["verify", "--k", "3", "--prog", "5", "--mod", "2"])),
        2
    );
    assert_eq!(
        code(&qcong(&[
            "verify", "--k", "3", "--prog", "0,1", "--mod", "2"
        ])),
        2
    );
    assert_eq!(code(&qcong(&["verify", "--catalog", "thm10"])), 2);
    assert_eq!(
        code(&qcong(&["verify", "--catalog", "thm7", "--terms", "500"])),
        0
    );
}

#[test]
fn catalog_json_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qcong"))
            .env("QCONG_THREADS", threads)
            .args([
                "verify",
                "--catalog",
                "all",
                "--terms",
                "300",
                "--jmax",
                "1",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = qcong(&[
        "scan",
        "--k",
        "1",
        "--mod",
        "11",
        "--steps",
        "11",
        "--terms",
        "2000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let report: ScanReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b: Vec<u64> = report.survivors().map(|e| e.report.claim.offset).collect();
    assert_eq!(b, vec![6]);

    let o = qcong(&[
        "scan", "--k", "3", "--mod", "2", "--steps", "2", "--terms", "500", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let report: ScanReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.survivor_count, 0);
}

#[test]
fn scan_config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.json");
    std::fs::write(&cfg, r#"{"k":[3],"M":[2],"A":[13],"N":3000}"#).unwrap();
    let o = qcong(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let report: ScanReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.config.precision, 3000);
    let b: Vec<u64> = report.survivors().map(|e| e.report.claim.offset).collect();
    assert!(b.contains(&3) && b.contains(&6));

    let o = qcong(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--terms",
        "400",
        "--steps",
        "5",
        "--format",
        "json",
    ]);
    let report: ScanReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.config.precision, 400);
    assert_eq!(report.grid_size, 5);

    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(
        code(&qcong(&["scan", "--config", cfg.to_str().unwrap()])),
        2
    );
}

#[test]
fn scan_ceiling_exit_code() {
    let o = qcong(&[
        "scan", "--k", "3", "--mod", "2", "--steps", "3", "--terms", "60000",
    ]);
    assert_eq!(code(&o), 3);
    let o = qcong(&[
        "scan", "--k", "3,5", "--mod", "2,3,5", "--steps", "300,400", "--terms", "50000",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn dissect_commands() {
    let o = qcong(&["dissect", "--all", "--terms", "1000"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = qcong(&["dissect", "L5-literal", "--terms", "10", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["mismatch"]["index"], 0);

    let o = qcong(&[
        "dissect",
        "L3-support",
        "--terms",
        "2000",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["classes"], serde_json::json!([0, 1, 3, 6]));

    let o = qcong(&["dissect", "L42"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("L5-literal"));
}

#[test]
fn oracle_rows() {
    let o = qcong(&["oracle", "--k", "3", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("16 / 16 / 16"));
    assert!(stdout(&o).contains("match"));

    let o = qcong(&["oracle", "--k", "1", "--n", "6", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1,6,11,11,11,true"));

    let o = qcong(&["oracle", "--k", "2", "--n", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bruteforce"], "2");
    assert_eq!(v["matched"], true);

    assert_eq!(code(&qcong(&["oracle", "--k", "2", "--n", "41"])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&qcong(&[])), 2);
    assert_eq!(code(&qcong(&["frobnicate"])), 2);
    assert_eq!(code(&qcong(&["expand", "1", "--terms", "0"])), 2);
    assert_eq!(code(&qcong(&["expand", "1", "--mod", "1"])), 2);
}
