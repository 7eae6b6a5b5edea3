//! Run configuration with flags-over-file-over-defaults precedence.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Scan,
    Mub,
    Fm,
    Report,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Verify => "verify",
            Command::Scan => "scan",
            Command::Mub => "mub",
            Command::Fm => "fm",
            Command::Report => "report",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutFormat::Json),
            "csv" => Ok(OutFormat::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Usage or configuration problem; exit code 2.
    Config(String),
    /// A verification suite failed; exit code 1.
    Verification(String),
    /// Library or I/O failure during a run; exit code 1.
    Run(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Verification(m) => write!(f, "verification failure: {m}"),
            CliError::Run(m) => write!(f, "run error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ivd::Error> for CliError {
    fn from(e: ivd::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

/// The fields a JSON config file may set; exactly the resolvable knobs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub dim: Option<usize>,
    pub probe_dim: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<String>,
    pub format: Option<OutFormat>,
    pub attack: Option<String>,
    pub theta: Option<f64>,
    pub theta_grid: Option<String>,
    pub function: Option<String>,
    pub group: Option<String>,
    pub dir: Option<String>,
}

/// Fully resolved configuration for one command run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// System dimension; `None` for verify means the full dimension sweep.
    pub dim: Option<usize>,
    pub probe_dim: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: OutFormat,
    pub attack: String,
    pub theta: f64,
    pub theta_grid: String,
    pub function: String,
    pub group: String,
    pub dir: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves flags over file values over defaults and validates ranges.
    pub fn resolve(
        command: Command,
        flags: PartialConfig,
        file: PartialConfig,
    ) -> Result<Self, CliError> {
        let dim = flags.dim.or(file.dim);
        let cfg = RunConfig {
            command,
            dim,
            probe_dim: flags.probe_dim.or(file.probe_dim),
            trials: flags.trials.or(file.trials).unwrap_or(200),
            seed: flags.seed.or(file.seed).unwrap_or(1),
            tol: flags.tol.or(file.tol).unwrap_or(1e-9),
            out: flags.out.or(file.out).map(PathBuf::from),
            format: flags.format.or(file.format).unwrap_or(match command {
                Command::Scan => OutFormat::Csv,
                _ => OutFormat::Json,
            }),
            attack: flags
                .attack
                .or(file.attack)
                .unwrap_or_else(|| "identity".to_string()),
            theta: flags.theta.or(file.theta).unwrap_or(0.0),
            theta_grid: flags
                .theta_grid
                .or(file.theta_grid)
                .unwrap_or_else(|| "32".to_string()),
            function: flags
                .function
                .or(file.function)
                .unwrap_or_else(|| "identity".to_string()),
            group: flags
                .group
                .or(file.group)
                .unwrap_or_else(|| "cyclic".to_string()),
            dir: flags.dir.or(file.dir).map(PathBuf::from),
        };
        if let Some(d) = cfg.dim {
            if d < 2 {
                return Err(CliError::Config(format!("dim must be at least 2, got {d}")));
            }
        }
        if cfg.trials < 1 {
            return Err(CliError::Config("trials must be at least 1".to_string()));
        }
        if !(cfg.tol > 0.0) {
            return Err(CliError::Config(format!(
                "tol must be positive, got {}",
                cfg.tol
            )));
        }
        Ok(cfg)
    }

    /// System dimension with the per-command default.
    pub fn dim_or_default(&self) -> usize {
        self.dim.unwrap_or(2)
    }

    pub fn probe_dim_or_default(&self) -> usize {
        let d = self.dim_or_default();
        self.probe_dim.unwrap_or(d * d)
    }
}

/// Loads a JSON config file.
pub fn load_config_file(path: &std::path::Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}
