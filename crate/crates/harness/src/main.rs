use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nag_harness::{
    beta_sweep, bounds, compare, derived_constants, run, spectral, ExperimentConfig, HarnessError,
    Overrides, Result, WORKERS_ENV,
};

/// Distributed Nash equilibrium seeking on networked Cournot games.
#[derive(Parser)]
#[command(name = "nag", version)]
struct Cli {
    /// TOML experiment configuration; defaults are used when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: OverrideArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OverrideArgs {
    /// Overrides `game.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides `topology.kind` (linear, log or complete).
    #[arg(long, global = true)]
    topology: Option<String>,
    /// Overrides `solver.alpha`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Overrides `solver.beta`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Overrides `solver.max_iters`.
    #[arg(long, global = true)]
    iters: Option<usize>,
    /// Overrides `output.path`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured solver and write a trace file.
    Run,
    /// Compare fixed steps against the diminishing-step baseline.
    Compare,
    /// Tune alpha for each beta and report the gap at the tuner horizon.
    BetaSweep {
        /// Comma-separated betas; defaults to `tuner.betas`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        betas: Option<Vec<f64>>,
    },
    /// Print the certified step-size region and rate certificate.
    Bounds {
        /// Strong monotonicity modulus; derived from the configured game when omitted.
        #[arg(long)]
        mu: Option<f64>,
        /// Lipschitz constant of each player's gradient map.
        #[arg(long = "lipschitz")]
        lipschitz: Option<f64>,
        /// Second largest singular value of the weight matrix.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Print sigma and connectivity of the configured topology.
    Spectral {
        /// Number of nodes; defaults to `game.n`.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    configure_workers()?;
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let o = cli.overrides;
    config.apply(&Overrides {
        seed: o.seed,
        topology: o.topology,
        alpha: o.alpha,
        beta: o.beta,
        iters: o.iters,
        out: o.out,
    });

    match cli.command {
        Command::Run => print!("{}", run(&config)?),
        Command::Compare => print!("{}", compare(&config)?),
        Command::BetaSweep { betas } => {
            let betas = betas.unwrap_or_else(|| config.tuner.betas.clone());
            print!("{}", beta_sweep(&config, &betas)?);
        }
        Command::Bounds {
            mu,
            lipschitz,
            sigma,
        } => {
            let (mu, lipschitz, sigma) = match (mu, lipschitz, sigma) {
                (Some(m), Some(l), Some(s)) => (m, l, s),
                (None, None, None) => derived_constants(&config)?,
                _ => {
                    return Err(HarnessError::Config(
                        "give all of --mu, --lipschitz and --sigma, or none of them".into(),
                    ))
                }
            };
            print!("{}", bounds(mu, lipschitz, sigma)?);
        }
        Command::Spectral { n } => {
            config.validate()?;
            let n = n.unwrap_or(config.game.n);
            print!("{}", spectral(config.topology_kind()?, n)?);
        }
    }
    Ok(())
}

fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value.parse().ok().filter(|&w| w > 0).ok_or_else(|| {
        HarnessError::Config(format!(
            "{WORKERS_ENV} must be a positive integer, got `{value}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))
}
