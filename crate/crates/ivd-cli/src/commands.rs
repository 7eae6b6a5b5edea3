//! The five subcommands: verify, scan, mub, fm, report.

use crate::config::{CliError, OutFormat, RunConfig};
use crate::fmt17;
use ivd::attack::{builtin_attack, eve_states, extract_kraus_vectors, AttackKind, AttackKraus};
use ivd::bounds::ivd_bound;
use ivd::fm::{check_theorem2, function_entropy, sigma_states, FmReport, FunctionSpec, GroupLaw};
use ivd::info::QuantumSource;
use ivd::linalg::Povm;
use ivd::mub::{fourier_matrix, is_mub_pair, prime_mub_set};
use ivd::optimizer::{optimize_povm, pretty_good_measurement, OptimizerConfig, ScanFamily, ScanRow};
use ivd::report::{sha256_hex, BoundReport, InputsDigest};
use ivd::suites::{all_suites, SuiteConfig, SuiteResult};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

fn out_path(cfg: &RunConfig, default_name: &str) -> PathBuf {
    cfg.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(default_name))
}

// ---------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct VerifyReport {
    command: String,
    dims: Vec<usize>,
    trials: usize,
    seed: u64,
    tol: f64,
    all_passed: bool,
    suites: Vec<SuiteResult>,
}

/// Runs every verification suite; exit is nonzero when any suite fails.
/// The written report carries only deterministic fields; runtimes are
/// printed to the console.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let dims = match cfg.dim {
        Some(d) => vec![d],
        None => vec![2, 3, 4, 5, 8],
    };
    let suite_cfg = SuiteConfig {
        dims: dims.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        tol_scale: cfg.tol / 1e-9,
    };
    let mut suites = Vec::new();
    let mut all_passed = true;
    println!(
        "{:<36} {:>6} {:>13} {:>8} {:>9}",
        "suite", "status", "worst_slack", "checks", "runtime"
    );
    for (name, suite) in all_suites() {
        let start = Instant::now();
        let result = suite(&suite_cfg);
        let elapsed = start.elapsed();
        println!(
            "{:<36} {:>6} {:>+13.3e} {:>8} {:>8.2?}",
            name,
            if result.passed { "pass" } else { "FAIL" },
            result.worst_slack,
            result.checks,
            elapsed
        );
        all_passed &= result.passed;
        suites.push(result);
    }
    let report = VerifyReport {
        command: "verify".to_string(),
        dims,
        trials: cfg.trials,
        seed: cfg.seed,
        tol: cfg.tol,
        all_passed,
        suites,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Run(e.to_string()))?;
    write_output(&out_path(cfg, "verify_report.json"), json.as_bytes())?;
    if all_passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.name.as_str())
            .collect();
        Err(CliError::Verification(format!(
            "failing suites: {}",
            failed.join(", ")
        )))
    }
}

// ---------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------

fn parse_theta_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if let Ok(n) = spec.parse::<usize>() {
        if n < 1 {
            return Err(CliError::Config("theta grid needs at least 1 point".into()));
        }
        if n == 1 {
            return Ok(vec![0.0]);
        }
        return Ok((0..n)
            .map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / (n - 1) as f64)
            .collect());
    }
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("bad theta '{tok}': {e}")))
        })
        .collect()
}

fn scan_family(cfg: &RunConfig) -> Result<ScanFamily, CliError> {
    match cfg.attack.as_str() {
        "identity" => Ok(ScanFamily::Identity),
        "basis_copy" => Ok(ScanFamily::BasisCopy),
        "intercept_resend" => Ok(ScanFamily::InterceptResend),
        "partial_copy" => Ok(ScanFamily::PartialCopy {
            thetas: parse_theta_grid(&cfg.theta_grid)?,
        }),
        "random" => Ok(ScanFamily::RandomHaar { trials: cfg.trials }),
        other => Err(CliError::Config(format!(
            "unknown attack family '{other}' (expected identity, basis_copy, intercept_resend, partial_copy, or random)"
        ))),
    }
}

const SCAN_HEADER: &str = "dim,probe_dim,attack_kind,theta,hadamard_id,p_err_mub,corollary_bound_bits,thm1_bound_bits,povm_info_bits,holevo_bits,seed";

fn scan_rows_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.dim,
            r.probe_dim,
            r.attack_kind,
            fmt17(r.theta),
            r.hadamard_id,
            fmt17(r.p_err_mub),
            fmt17(r.corollary_bound_bits),
            fmt17(r.thm1_bound_bits),
            fmt17(r.povm_info_bits),
            fmt17(r.holevo_bits),
            r.seed
        ));
    }
    out
}

/// Sweeps one attack family and writes the per-point bound table.
pub fn cmd_scan(cfg: &RunConfig) -> Result<(), CliError> {
    let dim = cfg.dim_or_default();
    let probe_dim = cfg.probe_dim_or_default();
    let family = scan_family(cfg)?;
    let h = fourier_matrix(dim)?;
    let opt = OptimizerConfig {
        seed: cfg.seed,
        ..OptimizerConfig::default()
    };
    let rows = ivd::optimizer::tightness_scan(&family, dim, probe_dim, &h, &opt, cfg.seed)?;
    let (bytes, default_name) = match cfg.format {
        OutFormat::Csv => (scan_rows_to_csv(&rows).into_bytes(), "scan.csv"),
        OutFormat::Json => (
            serde_json::to_vec_pretty(&rows).map_err(|e| CliError::Run(e.to_string()))?,
            "scan.json",
        ),
    };
    let path = out_path(cfg, default_name);
    write_output(&path, &bytes)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

// ---------------------------------------------------------------------
// mub
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct MubOutput {
    dim: usize,
    n_bases: usize,
    construction: String,
    max_unbiasedness_deviation: f64,
    labels: Vec<String>,
    /// Row-major [re, im] pairs per basis matrix.
    bases: Vec<Vec<[f64; 2]>>,
}

fn is_small_prime(d: usize) -> bool {
    d >= 2 && d <= 97 && (2..d).all(|k| d % k != 0)
}

/// Emits a certified MUB set: the complete prime-dimension set when D is
/// prime, otherwise the computational/Fourier pair.
pub fn cmd_mub(cfg: &RunConfig) -> Result<(), CliError> {
    let dim = cfg.dim_or_default();
    let (bases, labels, construction, deviation) = if is_small_prime(dim) {
        let set = prime_mub_set(dim as u64, true)?;
        (
            set.bases().to_vec(),
            set.labels().to_vec(),
            set.construction().to_string(),
            set.max_deviation(),
        )
    } else {
        let f = fourier_matrix(dim)?;
        let ident = ivd::linalg::CMatrix::identity(dim, dim);
        let (_, dev) = is_mub_pair(&ident, f.matrix(), 1e-10)?;
        (
            vec![ident, f.matrix().clone()],
            vec!["computational".to_string(), f.id().to_string()],
            "computational+fourier".to_string(),
            dev,
        )
    };
    let out = MubOutput {
        dim,
        n_bases: bases.len(),
        construction,
        max_unbiasedness_deviation: deviation,
        labels,
        bases: bases
            .iter()
            .map(|b| {
                let mut flat = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        flat.push([b[(i, j)].re, b[(i, j)].im]);
                    }
                }
                flat
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&out).map_err(|e| CliError::Run(e.to_string()))?;
    let path = out_path(cfg, "mub.json");
    write_output(&path, json.as_bytes())?;
    println!(
        "wrote {} bases (deviation {:.3e}) to {}",
        out.n_bases,
        out.max_unbiasedness_deviation,
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// fm
// ---------------------------------------------------------------------

fn parse_function(spec: &str, dim: usize) -> Result<FunctionSpec, CliError> {
    if spec == "identity" {
        return Ok(FunctionSpec::identity(dim));
    }
    if spec == "constant" {
        return Ok(FunctionSpec::constant(dim, 0));
    }
    if let Some(point) = spec.strip_prefix("indicator:") {
        let p: usize = point
            .parse()
            .map_err(|e| CliError::Config(format!("bad indicator point '{point}': {e}")))?;
        if p >= dim {
            return Err(CliError::Config(format!(
                "indicator point {p} outside the domain of size {dim}"
            )));
        }
        return Ok(FunctionSpec::indicator(dim, p));
    }
    if let Some(table) = spec.strip_prefix("table:") {
        let values: Result<Vec<i64>, _> = table.split(',').map(|t| t.trim().parse()).collect();
        let values =
            values.map_err(|e| CliError::Config(format!("bad function table '{table}': {e}")))?;
        if values.len() != dim {
            return Err(CliError::Config(format!(
                "function table has {} entries, domain needs {dim}",
                values.len()
            )));
        }
        return Ok(FunctionSpec::from_table(values)?);
    }
    Err(CliError::Config(format!(
        "unknown function '{spec}' (expected identity, constant, indicator:<point>, or table:<comma-list>)"
    )))
}

fn parse_group(spec: &str, dim: usize) -> Result<GroupLaw, CliError> {
    match spec {
        "cyclic" => Ok(GroupLaw::cyclic(dim)),
        "xor" => GroupLaw::xor_for_dim(dim).map_err(|_| {
            CliError::Config(format!("xor group needs a power-of-two dimension, got {dim}"))
        }),
        other => Err(CliError::Config(format!(
            "unknown group '{other}' (expected cyclic or xor)"
        ))),
    }
}

fn attack_kind_from_cfg(cfg: &RunConfig) -> Result<AttackKind, CliError> {
    match cfg.attack.as_str() {
        "identity" => Ok(AttackKind::Identity),
        "basis_copy" => Ok(AttackKind::BasisCopy),
        "intercept_resend" => Ok(AttackKind::InterceptResend { basis: None }),
        "partial_copy" => Ok(AttackKind::PartialCopy { theta: cfg.theta }),
        other => Err(CliError::Config(format!(
            "unknown attack '{other}' (expected identity, basis_copy, intercept_resend, partial_copy, or random)"
        ))),
    }
}

/// The default measurement list for the exact side of the encrypted-message
/// bound: probe computational projectors, the pretty-good measurement on
/// the announcement-0 conditional ensemble, and the optimizer output for
/// the same ensemble.
pub fn default_fm_povms(
    eve: &QuantumSource,
    f: &FunctionSpec,
    g: &GroupLaw,
    opt_seed: u64,
) -> Result<Vec<Povm>, ivd::Error> {
    let mut povms = vec![Povm::computational(eve.dim())];
    let sigmas = sigma_states(eve, f, 0, g)?;
    let sigma_source = QuantumSource::new(
        sigmas.iter().map(|s| s.state.clone()).collect(),
        ivd::info::ProbVector::new(sigmas.iter().map(|s| s.weight).collect(), 1e-9)?,
    )?;
    povms.push(pretty_good_measurement(&sigma_source)?);
    let cfg = OptimizerConfig {
        seed: opt_seed,
        ..OptimizerConfig::default()
    }
    .scaled_for(sigma_source.dim(), sigma_source.n_states());
    povms.push(optimize_povm(&sigma_source, &cfg)?.povm);
    Ok(povms)
}

#[derive(Debug, Serialize)]
struct FmOutput {
    dim: usize,
    probe_dim: usize,
    attack: String,
    theta: f64,
    function: String,
    group: String,
    hadamard_id: String,
    seed: u64,
    report: FmReport,
    bound_reports: Vec<BoundReport>,
}

/// Evaluates the function-of-message bound for one configured attack.
pub fn cmd_fm(cfg: &RunConfig) -> Result<(), CliError> {
    let dim = cfg.dim_or_default();
    let probe_dim = cfg.probe_dim_or_default();
    let f = parse_function(&cfg.function, dim)?;
    let g = parse_group(&cfg.group, dim)?;
    let h = fourier_matrix(dim)?;

    let kraus = if cfg.attack == "random" {
        AttackKraus::random_haar(dim, probe_dim, cfg.seed)?
    } else {
        let kind = attack_kind_from_cfg(cfg)?;
        extract_kraus_vectors(&builtin_attack(&kind, dim, probe_dim)?)?
    };

    let eve = eve_states(&kraus)?;
    let povms = default_fm_povms(&eve, &f, &g, cfg.seed)?;
    let report = check_theorem2(&kraus, &h, &f, &g, &povms)?;

    let mut digest = InputsDigest::new();
    digest
        .push_u64(dim as u64)
        .push_u64(probe_dim as u64)
        .push_str(&cfg.attack)
        .push_f64(cfg.theta)
        .push_str(&cfg.function)
        .push_str(g.name())
        .push_str(h.id())
        .push_u64(cfg.seed);
    for i in 0..dim {
        for j in 0..dim {
            digest.push_vector(kraus.vector(i, j));
        }
    }
    let digest = digest.finish();

    let bound_reports = vec![
        BoundReport::new(
            "fm_bound",
            report.bound,
            Some(report.exact_cond_info),
            digest.clone(),
        )?,
        BoundReport::new(
            "ivd_bound",
            ivd_bound(dim, report.p_err_mub)?,
            None,
            digest.clone(),
        )?,
        BoundReport::new("h_fk_bits", function_entropy(&f), None, digest)?,
    ];

    let out = FmOutput {
        dim,
        probe_dim,
        attack: cfg.attack.clone(),
        theta: cfg.theta,
        function: cfg.function.clone(),
        group: cfg.group.clone(),
        hadamard_id: h.id().to_string(),
        seed: cfg.seed,
        report,
        bound_reports,
    };
    let json = serde_json::to_string_pretty(&out).map_err(|e| CliError::Run(e.to_string()))?;
    let path = out_path(cfg, "fm_report.json");
    write_output(&path, json.as_bytes())?;
    println!(
        "exact {:.6} bits <= bound {:.6} bits (P̃ₑ = {:.6}); wrote {}",
        out.report.exact_cond_info,
        out.report.bound,
        out.report.p_err_mub,
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// report
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct FileDigest {
    name: String,
    bytes: usize,
    sha256: String,
    kind: String,
}

#[derive(Debug, Serialize)]
struct ReportSummary {
    command: String,
    dir: String,
    files: Vec<FileDigest>,
}

/// Aggregates prior outputs in a directory into one digest summary.
pub fn cmd_report(cfg: &RunConfig) -> Result<(), CliError> {
    let dir = cfg
        .dir
        .clone()
        .ok_or_else(|| CliError::Config("report needs --dir <directory>".into()))?;
    if !dir.is_dir() {
        return Err(CliError::Config(format!(
            "{} is not a directory",
            dir.display()
        )));
    }
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(CliError::Config(format!(
            "no input files in {}",
            dir.display()
        )));
    }
    let mut files = Vec::with_capacity(names.len());
    for path in names {
        let bytes = std::fs::read(&path)?;
        let kind = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("other")
            .to_string();
        files.push(FileDigest {
            name: path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or("?")
                .to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(&bytes),
            kind,
        });
    }
    let summary = ReportSummary {
        command: "report".to_string(),
        dir: dir.display().to_string(),
        files,
    };
    let json = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Run(e.to_string()))?;
    let path = out_path(cfg, "report_summary.json");
    write_output(&path, json.as_bytes())?;
    println!("digested {} files into {}", summary.files.len(), path.display());
    Ok(())
}

/// Dispatch by resolved command.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        crate::config::Command::Verify => cmd_verify(cfg),
        crate::config::Command::Scan => cmd_scan(cfg),
        crate::config::Command::Mub => cmd_mub(cfg),
        crate::config::Command::Fm => cmd_fm(cfg),
        crate::config::Command::Report => cmd_report(cfg),
    }
}
