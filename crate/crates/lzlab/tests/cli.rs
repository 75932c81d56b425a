//! Black-box tests of the command-line surface: flags, formats, exit codes,
//! determinism and the persistent cache.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lzlab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lzlab"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.env_remove("LZLAB_CACHE");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn ext_json_table() {
    let out = lzlab(
        &[
            "ext", "--p", "3", "--s", "1", "--t-max", "12", "--format", "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["schema"], "lzlab/1");
    assert_eq!(doc["p"], 3);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let dim_at = |t: i64| {
        rows.iter()
            .find(|r| r["t"] == t)
            .map(|r| r["ext_dim"].as_u64().unwrap())
            .unwrap()
    };
    assert_eq!(dim_at(0), 1);
    assert_eq!(dim_at(3), 1);
    assert_eq!(dim_at(11), 1);
    assert_eq!(dim_at(7), 0);
}

#[test]
fn ext_s0_single_row() {
    let out = lzlab(
        &[
            "ext", "--p", "3", "--s", "0", "--t-max", "0", "--format", "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["rows"][0]["ext_dim"], 1);
}

#[test]
fn phi_json_matches_schema_example() {
    let out = lzlab(
        &[
            "phi", "--p", "3", "--s", "2", "--t-max", "10", "--format", "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains(r#"{"s":2,"t":10,"ext_dim":1,"ann_dim":1,"phi_rank":1,"image":["bQ2 bQ1"]}"#),
        "{text}"
    );
}

#[test]
fn verify_suite_exit_zero_and_csv_text_render() {
    let out = lzlab(
        &[
            "verify", "--suite", "adem", "--p", "3", "--t-max", "40", "--format", "text",
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS adem_confluence"));
    let out = lzlab(
        &[
            "verify", "--suite", "dickson", "--p", "3", "--format", "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("# verdict,dickson_mui_relations_s1,pass"));
}

#[test]
fn usage_errors_exit_one() {
    // Unknown subcommand.
    let out = lzlab(&["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(1));
    // Missing --s.
    let out = lzlab(&["ext", "--p", "3", "--t-max", "5"], &[]);
    assert_eq!(out.status.code(), Some(1));
    // Not an odd prime.
    let out = lzlab(&["ext", "--p", "4", "--s", "1", "--t-max", "5"], &[]);
    assert_eq!(out.status.code(), Some(1));
    // Over the feasibility cap without --force.
    let out = lzlab(&["ann", "--p", "3", "--s", "3", "--t-max", "100"], &[]);
    assert_eq!(out.status.code(), Some(1));
    // Help still exits zero.
    let out = lzlab(&["--help"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deterministic_output_across_runs_and_widths() {
    let args = [
        "verify", "--suite", "adem", "--p", "3", "--t-max", "40", "--seed", "11", "--format",
        "json",
    ];
    let a = stdout(&lzlab(&args, &[]));
    let b = stdout(&lzlab(&args, &[]));
    assert_eq!(a, b);
    let mut wide = args.to_vec();
    wide.extend_from_slice(&["--jobs", "4"]);
    let c = stdout(&lzlab(&wide, &[]));
    assert_eq!(a, c);
}

#[test]
fn cache_cold_warm_identical_and_env_default() {
    let dir = std::env::temp_dir().join(format!("lzlab-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let dir_str = dir.to_str().unwrap();
    let args = [
        "verify", "--suite", "adem", "--p", "3", "--t-max", "40", "--format", "json",
    ];
    let cold = lzlab(&args, &[("LZLAB_CACHE", dir_str)]);
    assert!(cold.status.success());
    let cache_file: PathBuf = dir.join("adem-p3.cache");
    assert!(cache_file.exists(), "LZLAB_CACHE is honored as the default");
    let size_after_cold = std::fs::metadata(&cache_file).unwrap().len();
    let warm = lzlab(&args, &[("LZLAB_CACHE", dir_str)]);
    assert!(warm.status.success());
    assert_eq!(stdout(&cold), stdout(&warm));
    // Append-only: the warm run learned nothing new.
    assert_eq!(
        std::fs::metadata(&cache_file).unwrap().len(),
        size_after_cold
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn conjecture_report_rows() {
    let out = lzlab(
        &[
            "conjecture",
            "--p",
            "3",
            "--s",
            "1",
            "--t-max",
            "10",
            "--format",
            "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let find = |t: i64| rows.iter().find(|r| r["t"] == t).unwrap();
    assert_eq!(find(3)["in_abar"], false);
    assert_eq!(find(8)["in_abar"], true);
}
