//! Command-line entry point for solving, simulating, and the two reference experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trust_pomdp::experiment::{
    load_config, parse_config, run_experiment1, run_experiment2, run_simulate, run_solve, with_workers, RunConfig,
};
use trust_pomdp::{ConfigError, RunError};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "trust-pomdp", version, about = "Trust-aware POMDP planning and mission simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the planner at one site of the fixed-seed mission and export its policy grid.
    Solve {
        #[command(flatten)]
        common: Common,
        /// One-based site to solve at.
        #[arg(long, default_value_t = 1)]
        site: usize,
    },
    /// Monte Carlo simulation of the configured scenario.
    Simulate(Common),
    /// Policy grids for all planner conditions at sites 1, 3, ..., N.
    Exp1(Common),
    /// Full factorial team-performance sweep.
    Exp2(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides `master_seed` and the mission seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Episodes per scenario (overrides `n_episodes`).
    #[arg(long)]
    episodes: Option<usize>,
}

impl Common {
    fn resolve(&self) -> Result<(RunConfig, PathBuf), ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => parse_config("")?,
        };
        if let Some(seed) = self.seed {
            cfg.scenario.master_seed = seed;
            cfg.scenario.env.seed = seed;
        }
        if let Some(n) = self.episodes {
            cfg.scenario.n_episodes = n;
        }
        cfg.validate()?;
        let out = self.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
        Ok((cfg, out))
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Solve { common, site } => {
            let (cfg, out) = common.resolve()?;
            for path in with_workers(None, || run_solve(&cfg, site, &out))?? {
                println!("wrote {}", path.display());
            }
        }
        Command::Simulate(common) => {
            let (cfg, out) = common.resolve()?;
            let stats = with_workers(None, || run_simulate(&cfg, &out))??;
            println!(
                "episodes={} J_m={:.3} (sd {:.3}) final_trust={:.4} (sd {:.4})",
                stats.n_episodes, stats.mean_reward, stats.std_reward, stats.mean_final_trust, stats.std_final_trust
            );
            println!("wrote {}", out.join("summary.csv").display());
        }
        Command::Exp1(common) => {
            let (cfg, out) = common.resolve()?;
            let result = with_workers(None, || run_experiment1(&cfg, &out))??;
            println!("wrote {} grids and {}", result.files.len(), result.manifest.display());
        }
        Command::Exp2(common) => {
            let (cfg, out) = common.resolve()?;
            let result = with_workers(None, || run_experiment2(&cfg, &out))??;
            println!("wrote {} rows to {}", result.rows.len(), result.results.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(e)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
