use clap::{Args, Parser, Subcommand};
use ivd_cli::{exit_code, CliError, Command, OutFormat, PartialConfig, RunConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "ivd",
    about = "Information-vs-disturbance toolkit: verification suites, eavesdropping-attack sweeps, MUB generation, and encrypted-message reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: CommandCli,
}

#[derive(Subcommand)]
enum CommandCli {
    /// Run every numerical verification suite and write a report.
    Verify(CommonArgs),
    /// Sweep an attack family and tabulate disturbance against the bounds.
    Scan(CommonArgs),
    /// Emit a certified set of mutually unbiased bases as JSON.
    Mub(CommonArgs),
    /// Evaluate the function-of-message bound for one attack.
    Fm(CommonArgs),
    /// Digest prior output files into one JSON summary.
    Report(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// System dimension D (verify default: sweep over 2,3,4,5,8).
    #[arg(long)]
    dim: Option<usize>,

    /// Probe dimension (default D²).
    #[arg(long = "probe-dim")]
    probe_dim: Option<usize>,

    /// Random trials per dimension (default 200).
    #[arg(long)]
    trials: Option<usize>,

    /// Master seed; all randomness derives from it deterministically.
    #[arg(long)]
    seed: Option<u64>,

    /// Base numerical tolerance (default 1e-9); suite tolerances scale
    /// proportionally.
    #[arg(long)]
    tol: Option<f64>,

    /// Output file path (per-command default otherwise).
    #[arg(long)]
    out: Option<String>,

    /// Output format: json or csv (scan defaults to csv, others to json).
    #[arg(long)]
    format: Option<OutFormat>,

    /// Attack family: identity | basis_copy | intercept_resend |
    /// partial_copy | random.
    #[arg(long)]
    attack: Option<String>,

    /// Interaction strength for partial_copy, in [0, π/2].
    #[arg(long)]
    theta: Option<f64>,

    /// Theta grid for scan: a point count or a comma list of values.
    #[arg(long = "theta-grid")]
    theta_grid: Option<String>,

    /// Function of the message: identity | constant | indicator:<point> |
    /// table:<comma-list>.
    #[arg(long)]
    function: Option<String>,

    /// Group law for announcements: cyclic | xor.
    #[arg(long)]
    group: Option<String>,

    /// Input directory for the report command.
    #[arg(long)]
    dir: Option<String>,

    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn into_parts(self) -> (PartialConfig, Option<PathBuf>) {
        (
            PartialConfig {
                dim: self.dim,
                probe_dim: self.probe_dim,
                trials: self.trials,
                seed: self.seed,
                tol: self.tol,
                out: self.out,
                format: self.format,
                attack: self.attack,
                theta: self.theta,
                theta_grid: self.theta_grid,
                function: self.function,
                group: self.group,
                dir: self.dir,
            },
            self.config,
        )
    }
}

fn resolve(command: Command, args: CommonArgs) -> Result<RunConfig, CliError> {
    let (flags, config_path) = args.into_parts();
    let file = match config_path {
        Some(p) => ivd_cli::config::load_config_file(&p)?,
        None => PartialConfig::default(),
    };
    RunConfig::resolve(command, flags, file)
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        CommandCli::Verify(a) => resolve(Command::Verify, a).and_then(|c| ivd_cli::cmd_verify(&c)),
        CommandCli::Scan(a) => resolve(Command::Scan, a).and_then(|c| ivd_cli::cmd_scan(&c)),
        CommandCli::Mub(a) => resolve(Command::Mub, a).and_then(|c| ivd_cli::cmd_mub(&c)),
        CommandCli::Fm(a) => resolve(Command::Fm, a).and_then(|c| ivd_cli::cmd_fm(&c)),
        CommandCli::Report(a) => resolve(Command::Report, a).and_then(|c| ivd_cli::cmd_report(&c)),
    };
    if let Err(e) = &result {
        eprintln!("{e}");
    }
    std::process::exit(exit_code(&result));
}
