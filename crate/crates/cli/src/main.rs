//! Command-line front end: operator definitions come from JSON configs,
//! each subcommand runs one verification and exits 0 when it holds,
//! 1 when it fails, 2 on config errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Outcome;
use config::OperatorConfig;

#[derive(Parser)]
#[command(
    name = "poincare",
    version,
    about = "Constant-coefficient operator toolkit: symbol rank profiles, elliptic-complex checks, \
             completion search, Riesz-transform identities, and Poincare-constant estimation on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Operator definition (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Write the full JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Unit-sphere directions for rank and structure sampling
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Overrides the config's ensemble seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FindComplexArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dimension of the target space W; falls back to the config's dim_w
    #[arg(long)]
    dim_w: Option<usize>,
}

#[derive(Args)]
struct PoincareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Additionally record the literal vector-sum reading of the
    /// gradient norm (diagnostic, no pass criterion)
    #[arg(long)]
    literal_sum: bool,
}

#[derive(Args)]
struct RieszArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corrupt M(0) in every Riesz bank; mean-free ensembles cannot
    /// detect this (documented non-detecting fault case)
    #[arg(long)]
    inject_zero_frequency_fault: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the symbol rank over the unit sphere and test constancy
    CheckRank(CommonArgs),
    /// Verify the structure conditions for the (P, Q) pair
    CheckComplex(CommonArgs),
    /// Compute all completions Q of P for a target dimension of W
    FindComplex(FindComplexArgs),
    /// Estimate the Poincare constant over a random band-limited ensemble
    Poincare(PoincareArgs),
    /// Check the transform identities on random fields
    RieszCheck(RieszArgs),
}

enum CliError {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::CheckRank(args) => {
            let config = OperatorConfig::load(&args.config).map_err(CliError::Config)?;
            let op = config.operator().map_err(CliError::Config)?;
            let seed = args.seed.unwrap_or_else(|| config.ensemble_params(None, 0).seed);
            commands::cmd_check_rank(&config, &op, args.samples, seed, args.out.as_deref())
                .map_err(CliError::Run)
        }
        Command::CheckComplex(args) => {
            let config = OperatorConfig::load(&args.config).map_err(CliError::Config)?;
            let spec = config.complex_spec().map_err(CliError::Config)?;
            let seed = args.seed.unwrap_or_else(|| config.ensemble_params(None, 0).seed);
            commands::cmd_check_complex(&config, &spec, args.samples, seed, args.out.as_deref())
                .map_err(CliError::Run)
        }
        Command::FindComplex(args) => {
            let config = OperatorConfig::load(&args.common.config).map_err(CliError::Config)?;
            let op = config.operator().map_err(CliError::Config)?;
            let dim_w = args
                .dim_w
                .or(config.dim_w)
                .ok_or_else(|| {
                    CliError::Config(anyhow::anyhow!(
                        "find-complex needs --dim-w or a dim_w entry in the config"
                    ))
                })?;
            if dim_w == 0 {
                return Err(CliError::Config(anyhow::anyhow!("dim_w must be positive")));
            }
            let seed = args
                .common
                .seed
                .unwrap_or_else(|| config.ensemble_params(None, 0).seed);
            commands::cmd_find_complex(
                &config,
                &op,
                dim_w,
                args.common.samples,
                seed,
                args.common.out.as_deref(),
            )
            .map_err(CliError::Run)
        }
        Command::Poincare(args) => {
            let config = OperatorConfig::load(&args.common.config).map_err(CliError::Config)?;
            let op = config.operator().map_err(CliError::Config)?;
            commands::cmd_poincare(
                &config,
                &op,
                args.common.seed,
                args.common.samples,
                args.literal_sum,
                args.common.out.as_deref(),
            )
            .map_err(CliError::Run)
        }
        Command::RieszCheck(args) => {
            let config = OperatorConfig::load(&args.common.config).map_err(CliError::Config)?;
            let op = config.operator().map_err(CliError::Config)?;
            commands::cmd_riesz_check(
                &config,
                &op,
                args.common.seed,
                args.inject_zero_frequency_fault,
                args.common.out.as_deref(),
            )
            .map_err(CliError::Run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Verified) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(CliError::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CliError::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
    }
}
