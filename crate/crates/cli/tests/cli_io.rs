//! End-to-end checks of the command-line surface: argument validation,
//! exit codes, report formats, output files, and byte determinism across
//! worker counts.

use std::process::{Command, Output};

use itocheck::report::deterministic_view;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_itocheck"));
    c.env_remove("ITOCHECK_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn usage_errors_exit_2() {
    // Unparsable value.
    let out = run(&["dist-check", "--n", "-5"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flag.
    let out = run(&["dist-check", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown subcommand.
    let out = run(&["brownian-motion"]);
    assert_eq!(out.status.code(), Some(2));
    // Valid flag, value below the experiment's floor.
    let out = run(&["dist-check", "--n", "500"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
    // Fixed-parameter experiment rejects an override it cannot honor.
    let out = run(&["ito-check", "--steps", "64"]);
    assert_eq!(out.status.code(), Some(2));
    // Bad worker-cap environment variable.
    let out = bin()
        .args(["gsigma"])
        .env("ITOCHECK_THREADS", "many")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["dist-check", "--help"]).status.code(), Some(0));
}

#[test]
fn json_report_schema_on_stdout() {
    let out = run(&["gsigma"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid JSON");
    assert_eq!(v["name"], "gsigma");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 42);
    assert!(v["scalars"].is_object());
    assert!(v["checks"].is_object());
    assert!(v["series"]["sigmas"].is_array());
    assert!(v["notes"].is_array());
    assert_eq!(v["exclusions"], 0);
    assert_eq!(v["pass"], true);
    assert!(v["wall_time_s"].is_number());
}

#[test]
fn csv_format_has_header_and_sections() {
    let out = run(&["gsigma", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("section,key,index,value"));
    assert!(text.contains("meta,name,,\"gsigma\""));
    assert!(text.contains("series,sigmas,0,1.0"));
    assert!(text.contains("check,wide_sigma_mass_escapes,,true"));
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let out = run(&["gsigma", "--out", path.to_str().expect("utf-8 path")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("report written");
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(v["name"], "gsigma");
}

#[test]
fn unwritable_out_path_exits_2() {
    let out = run(&["gsigma", "--out", "/nonexistent-dir/report.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    // At n = 10⁴ the σ=0.7 Hill window is too small for its band: the
    // report is produced, the gate fails, and the exit code says so.
    let out = run(&["tail-index", "--n", "10000", "--sigma", "0.7"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid JSON");
    assert_eq!(v["pass"], false);
}

#[test]
fn seed_flag_changes_the_draws() {
    let a = stdout_str(&run(&["dist-check", "--n", "10000"]));
    let b = stdout_str(&run(&["dist-check", "--n", "10000", "--seed", "7"]));
    let va: serde_json::Value = serde_json::from_str(&a).expect("valid JSON");
    let vb: serde_json::Value = serde_json::from_str(&b).expect("valid JSON");
    assert_eq!(va["config"]["seed"], 42);
    assert_eq!(vb["config"]["seed"], 7);
    assert_ne!(va["scalars"]["ks_d"], vb["scalars"]["ks_d"]);
}

#[test]
fn reports_are_byte_identical_across_runs_workers_and_batches() {
    let run_with = |threads: &str, extra: &[&str]| {
        let mut args = vec!["dist-check", "--n", "20000"];
        args.extend_from_slice(extra);
        let out = bin()
            .args(&args)
            .env("ITOCHECK_THREADS", threads)
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0));
        deterministic_view(&String::from_utf8(out.stdout).expect("utf-8"))
            .expect("maskable JSON")
    };
    let base = run_with("1", &[]);
    assert_eq!(base, run_with("1", &[]), "same config, same bytes");
    assert_eq!(base, run_with("4", &[]), "worker count must not matter");
    assert_eq!(
        base,
        run_with("4", &["--batch", "512"]),
        "batch size must not matter"
    );
}
