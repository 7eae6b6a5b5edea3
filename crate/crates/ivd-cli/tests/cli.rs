//! Integration tests for the command layer: exit codes, output schemas,
//! and byte-determinism.

use ivd_cli::{
    cmd_fm, cmd_mub, cmd_report, cmd_scan, cmd_verify, exit_code, CliError, Command, OutFormat,
    PartialConfig, RunConfig,
};
use std::path::PathBuf;

fn base_config(command: Command, dir: &std::path::Path, out_name: &str) -> RunConfig {
    RunConfig {
        command,
        dim: Some(2),
        probe_dim: None,
        trials: 2,
        seed: 1,
        tol: 1e-9,
        out: Some(dir.join(out_name)),
        format: match command {
            Command::Scan => OutFormat::Csv,
            _ => OutFormat::Json,
        },
        attack: "identity".to_string(),
        theta: 0.0,
        theta_grid: "32".to_string(),
        function: "identity".to_string(),
        group: "cyclic".to_string(),
        dir: None,
    }
}

#[test]
fn scan_partial_copy_32_points() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Scan, tmp.path(), "scan.csv");
    cfg.attack = "partial_copy".to_string();
    cmd_scan(&cfg).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("scan.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 33); // header + 32 rows
    assert_eq!(
        lines[0],
        "dim,probe_dim,attack_kind,theta,hadamard_id,p_err_mub,corollary_bound_bits,thm1_bound_bits,povm_info_bits,holevo_bits,seed"
    );
    let last: Vec<&str> = lines[32].split(',').collect();
    let thm1: f64 = last[7].parse().unwrap();
    assert!(
        (thm1 - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-6,
        "thm1 at theta=pi/2 was {thm1}"
    );
}

#[test]
fn scan_identity_rows_are_informationless() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = base_config(Command::Scan, tmp.path(), "scan.csv");
    cmd_scan(&cfg).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("scan.csv")).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    for idx in [5usize, 6, 8, 9] {
        let v: f64 = row[idx].parse().unwrap();
        assert!(v.abs() < 1e-9, "column {idx} = {v}");
    }
}

#[test]
fn scan_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Scan, tmp.path(), "a.csv");
    cfg.attack = "partial_copy".to_string();
    cfg.theta_grid = "8".to_string();
    cmd_scan(&cfg).unwrap();
    cfg.out = Some(tmp.path().join("b.csv"));
    cmd_scan(&cfg).unwrap();
    let a = std::fs::read(tmp.path().join("a.csv")).unwrap();
    let b = std::fs::read(tmp.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scan_rejects_unknown_family() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Scan, tmp.path(), "scan.csv");
    cfg.attack = "cnot_everything".to_string();
    let result = cmd_scan(&cfg);
    assert!(matches!(result, Err(CliError::Config(_))));
    assert_eq!(exit_code(&result), 2);
}

#[test]
fn verify_smoke_run_passes_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Verify, tmp.path(), "verify.json");
    cfg.dim = Some(2);
    cfg.trials = 1;
    let result = cmd_verify(&cfg);
    assert_eq!(exit_code(&result), 0, "{result:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_passed"], serde_json::Value::Bool(true));
    assert!(report["suites"].as_array().unwrap().len() >= 20);
}

#[test]
fn verify_with_absurd_tolerance_fails_and_names_suites() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Verify, tmp.path(), "verify.json");
    cfg.trials = 1;
    cfg.tol = 1e-30;
    let result = cmd_verify(&cfg);
    assert_eq!(exit_code(&result), 1);
    match result {
        Err(CliError::Verification(msg)) => {
            assert!(msg.contains("linalg.") || msg.contains("bounds."), "{msg}")
        }
        other => panic!("expected verification failure, got {other:?}"),
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_passed"], serde_json::Value::Bool(false));
}

#[test]
fn mub_output_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Mub, tmp.path(), "mub.json");
    cfg.dim = Some(3);
    cmd_mub(&cfg).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("mub.json")).unwrap())
            .unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(v["n_bases"], 4);
    assert!(v["max_unbiasedness_deviation"].as_f64().unwrap() < 1e-10);
    let bases = v["bases"].as_array().unwrap();
    assert_eq!(bases.len(), 4);
    assert_eq!(bases[0].as_array().unwrap().len(), 9); // row-major [re,im] pairs
}

#[test]
fn mub_composite_dimension_uses_fourier_pair() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Mub, tmp.path(), "mub.json");
    cfg.dim = Some(6);
    cmd_mub(&cfg).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("mub.json")).unwrap())
            .unwrap();
    assert_eq!(v["n_bases"], 2);
    assert_eq!(v["construction"], "computational+fourier");
}

#[test]
fn fm_identity_attack_is_informationless() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = base_config(Command::Fm, tmp.path(), "fm.json");
    cmd_fm(&cfg).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("fm.json")).unwrap())
            .unwrap();
    let exact = v["report"]["exact_cond_info"].as_f64().unwrap();
    let bound = v["report"]["bound"].as_f64().unwrap();
    assert!(exact.abs() < 1e-9);
    assert!(bound.abs() < 1e-6); // bound takes sqrt of ~1e-16 disturbance noise
}

#[test]
fn fm_rejects_bad_function_and_group() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_config(Command::Fm, tmp.path(), "fm.json");
    cfg.function = "parity_of_vibes".to_string();
    assert_eq!(exit_code(&cmd_fm(&cfg)), 2);

    let mut cfg = base_config(Command::Fm, tmp.path(), "fm.json");
    cfg.dim = Some(3);
    cfg.group = "xor".to_string();
    assert_eq!(exit_code(&cmd_fm(&cfg)), 2);
}

#[test]
fn report_digests_directory() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("a.csv"), "x,y\n1,2\n").unwrap();
    std::fs::write(tmp.path().join("b.json"), "{}").unwrap();
    let mut cfg = base_config(Command::Report, tmp.path(), "summary.json");
    cfg.dir = Some(PathBuf::from(tmp.path()));
    cmd_report(&cfg).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    let files = v["files"].as_array().unwrap();
    assert_eq!(files.len(), 2);
    assert_eq!(files[0]["name"], "a.csv");
    assert_eq!(files[0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn report_on_empty_directory_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let mut cfg = base_config(Command::Report, tmp.path(), "summary.json");
    cfg.dir = Some(empty);
    let result = cmd_report(&cfg);
    assert_eq!(exit_code(&result), 2);

    let mut cfg2 = base_config(Command::Report, tmp.path(), "summary.json");
    cfg2.dir = None;
    assert_eq!(exit_code(&cmd_report(&cfg2)), 2);
}

#[test]
fn config_file_feeds_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("cfg.json");
    std::fs::write(&config_path, r#"{"dim": 3, "seed": 5}"#).unwrap();
    let file = ivd_cli::config::load_config_file(&config_path).unwrap();
    let flags = PartialConfig {
        seed: Some(9),
        ..Default::default()
    };
    let cfg = RunConfig::resolve(Command::Mub, flags, file).unwrap();
    assert_eq!(cfg.dim, Some(3)); // from file
    assert_eq!(cfg.seed, 9); // flag wins
}
