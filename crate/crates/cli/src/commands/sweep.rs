use clap::Args;
use dqm_core::formulas::{domain_size, k_threshold, recording_deadline};
use dqm_core::{ModelParams, Mode};
use rayon::prelude::*;

use super::NOT_RECORDABLE;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::grid::{int_grid, non_empty, real_grid};
use crate::output::{emit, Cell, Table};

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Openness values: list or inclusive `lo:hi`.
    #[arg(long, default_value = "0:10")]
    pub ns: String,

    /// Wavenumbers: list or `start:stop:count`.
    #[arg(long, default_value = "1")]
    pub ks: String,

    /// Damping values; defaults to the configured L.
    #[arg(long = "Ls", value_name = "GRID")]
    pub ls: Option<String>,

    /// Time at which threshold and domain size are evaluated.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
}

pub const COLUMNS: [&str; 6] = ["n", "k", "L", "T", "k_tilde_at_t", "domain_size_at_t"];

fn row(n: u64, k: f64, params: &ModelParams, t: f64) -> Result<Vec<Cell>, CliError> {
    let mode = Mode::new(k, n)?;
    let deadline = match recording_deadline(&mode, params).deadline {
        Some(d) => d.into(),
        None => NOT_RECORDABLE.into(),
    };
    Ok(vec![
        n.into(),
        k.into(),
        params.damping().into(),
        deadline,
        k_threshold(n, t, params)?.into(),
        domain_size(n, t, params)?.into(),
    ])
}

/// Rows ordered by L, then k, then n; each run of constant (L, k) is an
/// n-ordered slice.
pub fn table(args: &SweepArgs, cfg: &RunConfig) -> Result<Table, CliError> {
    let ns = non_empty(int_grid(&args.ns, "ns")?, "ns")?;
    let ks = non_empty(real_grid(&args.ks, "ks")?, "ks")?;
    let ls = match &args.ls {
        Some(spec) => non_empty(real_grid(spec, "Ls")?, "Ls")?,
        None => vec![cfg.params.damping()],
    };
    let params: Vec<ModelParams> = ls
        .iter()
        .map(|&l| ModelParams::new(l, cfg.params.speed()))
        .collect::<Result<_, _>>()?;

    let mut points: Vec<(u64, f64, &ModelParams)> = Vec::with_capacity(params.len() * ks.len() * ns.len());
    for p in &params {
        for &k in &ks {
            points.extend(ns.iter().map(|&n| (n, k, p)));
        }
    }
    let rows = points
        .par_iter()
        .map(|&(n, k, p)| row(n, k, p, args.t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn run(args: &SweepArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let table = table(args, cfg)?;
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(cfg.output.as_deref(), &text)
}
