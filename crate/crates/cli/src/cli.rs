use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{eval, figures, registry, sweep, trace, verify};
use crate::config::{Format, Overrides, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "dqm", version, about = "Damped/amplified oscillator pair: formulas, trajectories, checks and memory domains")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Flat `key = value` configuration file (keys: L, c, rel_tol, abs_tol, format, seed).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Damping constant L.
    #[arg(long = "L", global = true, value_name = "L")]
    pub damping: Option<f64>,

    /// Propagation speed c in omega0 = c k.
    #[arg(long = "c", global = true, value_name = "C")]
    pub speed: Option<f64>,

    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file; stdout when absent.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a closed-form quantity over grids of k (or omega0), n and t.
    Eval(eval::EvalArgs),
    /// Integrate the oscillator pair or the conjugate amplitude and print the trajectory.
    Trace(trace::TraceArgs),
    /// Run the identity, special-function and residual checks; exit 1 on any failure.
    Verify(verify::VerifyArgs),
    /// Lifetime curve families at fixed n (fig1) and fixed k (fig2).
    Figures(figures::FiguresArgs),
    /// Deadline, threshold and domain size over an (n, k, L) grid.
    Sweep(sweep::SweepArgs),
    /// Replay a stimulus event script and report persistence.
    Registry(registry::RegistryArgs),
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = Overrides {
            damping: self.damping,
            speed: self.speed,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            format: self.format,
            seed: self.seed,
            output: self.output.clone(),
        };
        RunConfig::resolve(self.config.as_deref(), flags)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.global.resolve()?;
    match cli.command {
        Command::Eval(args) => eval::run(&args, &cfg),
        Command::Trace(args) => trace::run(&args, &cfg),
        Command::Verify(args) => verify::run(&args, &cfg),
        Command::Figures(args) => figures::run(&args, &cfg),
        Command::Sweep(args) => sweep::run(&args, &cfg),
        Command::Registry(args) => registry::run(&args, &cfg),
    }
}
