use clap::{Args, ValueEnum};
use dqm_core::formulas::{
    capital_omega, domain_size, k_threshold, lifetime_lambda, omega_n, recording_deadline,
};
use dqm_core::{Error, ModelParams, Mode};

use super::{NOT_RECORDABLE, PAST_DEADLINE};
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::grid::{int_grid, non_empty, real_grid};
use crate::output::{emit, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    /// omega0 exp(-L t / (2n + 1)).
    #[value(name = "omega_n")]
    OmegaN,
    /// Real parametric frequency sqrt(omega_n^2 - L^2/4).
    #[value(name = "Omega")]
    Omega,
    /// Recording deadline.
    #[value(name = "T")]
    Deadline,
    /// Infrared threshold wavenumber.
    #[value(name = "k_tilde")]
    KTilde,
    /// Mode lifetime.
    #[value(name = "lambda")]
    Lambda,
    /// Coherence-domain size 2 pi / k_tilde.
    #[value(name = "domain_size")]
    DomainSize,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub formula: Formula,

    /// Wavenumbers: list `a,b` or `start:stop:count`.
    #[arg(long, default_value = "1", allow_hyphen_values = true, conflicts_with = "omega0")]
    pub k: String,

    /// Bare frequencies instead of wavenumbers (k = omega0 / c).
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<String>,

    /// Openness: list or inclusive `lo:hi`.
    #[arg(long, default_value = "0")]
    pub n: String,

    /// Times: list or `start:stop:count`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
}

pub const COLUMNS: [&str; 6] = ["formula", "k", "omega0", "n", "t", "value"];

fn status(e: Error) -> Result<Cell, CliError> {
    match e {
        Error::NotRecordable { .. } => Ok(NOT_RECORDABLE.into()),
        Error::PastDeadline { .. } => Ok(PAST_DEADLINE.into()),
        other => Err(other.into()),
    }
}

/// One formula value, or the status word when it has no real value.
pub fn evaluate(formula: Formula, mode: &Mode, t: f64, params: &ModelParams) -> Result<Cell, CliError> {
    let n = mode.n();
    let window = recording_deadline(mode, params);
    let cell = match formula {
        Formula::OmegaN => omega_n(t, n, mode.omega0(params), params)?.into(),
        Formula::Omega => match capital_omega(t, mode, params) {
            Some(v) => v.into(),
            None if !window.recordable() => NOT_RECORDABLE.into(),
            None => PAST_DEADLINE.into(),
        },
        Formula::Deadline => match window.deadline {
            Some(d) => d.into(),
            None => NOT_RECORDABLE.into(),
        },
        Formula::KTilde => k_threshold(n, t, params)?.into(),
        Formula::Lambda => lifetime_lambda(t, mode, params).map(Cell::from).or_else(status)?,
        Formula::DomainSize => domain_size(n, t, params)?.into(),
    };
    Ok(cell)
}

pub fn table(args: &EvalArgs, params: &ModelParams) -> Result<Table, CliError> {
    let modes_k: Vec<f64> = match &args.omega0 {
        Some(spec) => non_empty(real_grid(spec, "omega0")?, "omega0")?
            .into_iter()
            .map(|w| w / params.speed())
            .collect(),
        None => non_empty(real_grid(&args.k, "k")?, "k")?,
    };
    let ns = non_empty(int_grid(&args.n, "n")?, "n")?;
    let ts = non_empty(real_grid(&args.t, "t")?, "t")?;
    let name = args.formula.to_possible_value().expect("no skipped variants");

    let mut table = Table::new(&COLUMNS);
    for &k in &modes_k {
        for &n in &ns {
            let mode = Mode::new(k, n)?;
            for &t in &ts {
                let value = evaluate(args.formula, &mode, t, params)?;
                table.push(vec![
                    name.get_name().into(),
                    k.into(),
                    mode.omega0(params).into(),
                    n.into(),
                    t.into(),
                    value,
                ]);
            }
        }
    }
    Ok(table)
}

pub fn run(args: &EvalArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let table = table(args, &cfg.params)?;
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(cfg.output.as_deref(), &text)
}
