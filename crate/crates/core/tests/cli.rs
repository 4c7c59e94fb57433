use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qbracket");

fn qbracket(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("QBRACKET_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_csv() {
    let out = qbracket(&[
        "compute",
        "--f",
        "identity",
        "--mode",
        "all-parts",
        "--n",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,qbracket_coeff,closed_form_coeff"));
    let cols: Vec<(String, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 3, "no trailing comma");
            (f[1].to_string(), f[2].to_string())
        })
        .collect();
    let expected = ["0", "1", "3", "4", "7", "6", "12"];
    assert_eq!(cols.iter().map(|c| c.0.as_str()).collect::<Vec<_>>(), expected);
    assert_eq!(cols.iter().map(|c| c.1.as_str()).collect::<Vec<_>>(), expected);
    assert!(text.ends_with('\n'));
}

#[test]
fn compute_json_uses_decimal_strings() {
    let out = qbracket(&["compute", "--f", "power:3", "--n", "100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[4]["qbracket_coeff"], "73");
    assert!(rows[100]["closed_form_coeff"].is_string());
    assert_eq!(v["config"]["f_spec"], "power:3");
    assert!(v["version"].is_string());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        qbracket(&["compute", "--f", "nonsense", "--n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(qbracket(&["verify", "--identity", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        qbracket(&["verify", "--identity", "euler_moment", "--alpha", "-2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qbracket(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qbracket(&["verify", "--n", "5", "--oracle", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn io_error_exits_3() {
    let out = qbracket(&[
        "table",
        "--seq",
        "p",
        "--n",
        "5",
        "--output",
        "/nonexistent-dir/x/y.txt",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_single_identity_passes() {
    let out = qbracket(&["verify", "--identity", "euler_moment", "--alpha", "1", "--n", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/1 cases passed"));
}

#[test]
fn verify_stanley_vacuous() {
    let out = qbracket(&["verify", "--identity", "stanley", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_all_attaches_notes_to_distinct_reports() {
    let out = qbracket(&[
        "verify",
        "--identity",
        "all",
        "--n",
        "60",
        "--oracle",
        "15",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["overall"], true);
        let id = r["case"]["identity"].as_str().unwrap();
        let notes = r["notes"].as_array().unwrap();
        let has_note = notes
            .iter()
            .any(|n| n.as_str().unwrap().starts_with("distinct-parts convolution"));
        let expects_note = !matches!(id, "theorem1" | "squarefree_parity" | "eisenstein_moment");
        assert_eq!(has_note, expects_note, "{id}");
    }
}

#[test]
fn output_file_and_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["table", "--seq", "p", "--n", "10", "--output", "p.txt"])
        .env("QBRACKET_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("p.txt")).unwrap();
    assert_eq!(written, "1,1,2,3,5,7,11,15,22,30,42\n");
}

#[test]
fn table_golden() {
    assert_eq!(
        stdout(&qbracket(&["table", "--seq", "distinct_squares", "--n", "4"])),
        "0,1,1,2,4\n"
    );
    assert_eq!(
        stdout(&qbracket(&[
            "table",
            "--seq",
            "stat",
            "--f",
            "identity",
            "--mode",
            "distinct-parts",
            "--n",
            "4"
        ])),
        "0,1,3,7,14\n"
    );
}
