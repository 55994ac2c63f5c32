use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dqm_core::domains::{fig1_curves, fig2_curves, CurveFamily, TimeGrid, DEFAULT_LAMBDA_MAX};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::grid::{int_grid, non_empty, real_grid};
use crate::output::{emit, json, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Several k at fixed n.
    Fig1,
    /// Several n at fixed k.
    Fig2,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub family: Family,

    /// Wavenumbers of the fixed-n family.
    #[arg(long, default_value = "0.6,0.8,1,1.5,2,3")]
    pub ks: String,

    /// Openness of the fixed-n family.
    #[arg(long, default_value_t = 2)]
    pub n: u64,

    /// Openness values of the fixed-k family.
    #[arg(long, default_value = "0:5")]
    pub ns: String,

    /// Wavenumber of the fixed-k family.
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,

    /// Uniform samples of [0, T) per curve.
    #[arg(long, default_value_t = 200, conflicts_with = "t_grid")]
    pub points: usize,

    /// One shared time grid for every curve instead of per-curve sampling.
    #[arg(long)]
    pub t_grid: Option<String>,

    /// Curves stop once the lifetime exceeds this value.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    pub lambda_max: f64,

    /// Deadline sidecar JSON; defaults to `<output>.deadlines.json` when `--output` is set.
    #[arg(long, value_name = "FILE")]
    pub deadlines: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CurveDeadline {
    k: f64,
    n: u64,
    deadline: f64,
    samples: usize,
}

#[derive(Debug, Serialize)]
struct FamilyDeadlines<'a> {
    family_id: &'a str,
    curves: Vec<CurveDeadline>,
    skipped: &'a [dqm_core::domains::SkippedCurve],
}

pub fn families(args: &FiguresArgs, cfg: &RunConfig) -> Result<Vec<CurveFamily>, CliError> {
    let grid = match &args.t_grid {
        Some(spec) => TimeGrid::Shared(non_empty(real_grid(spec, "t-grid")?, "t-grid")?),
        None => TimeGrid::PerCurve { points: args.points },
    };
    let mut out = Vec::new();
    if matches!(args.family, Family::Fig1 | Family::Both) {
        let ks = non_empty(real_grid(&args.ks, "ks")?, "ks")?;
        out.push(fig1_curves(&ks, args.n, &cfg.params, &grid, args.lambda_max)?);
    }
    if matches!(args.family, Family::Fig2 | Family::Both) {
        let ns = non_empty(int_grid(&args.ns, "ns")?, "ns")?;
        out.push(fig2_curves(&ns, args.k, &cfg.params, &grid, args.lambda_max)?);
    }
    Ok(out)
}

/// Long format: one row per sample, `family_id,k,n,t,lambda`.
pub fn long_table(families: &[CurveFamily]) -> Table {
    let mut table = Table::new(&["family_id", "k", "n", "t", "lambda"]);
    for fam in families {
        for curve in &fam.curves {
            for &(t, lambda) in &curve.points {
                table.push(vec![
                    fam.family_id.as_str().into(),
                    curve.k.into(),
                    curve.n.into(),
                    t.into(),
                    lambda.into(),
                ]);
            }
        }
    }
    table
}

fn sidecar(families: &[CurveFamily]) -> String {
    let doc: Vec<FamilyDeadlines> = families
        .iter()
        .map(|f| FamilyDeadlines {
            family_id: &f.family_id,
            curves: f
                .curves
                .iter()
                .map(|c| CurveDeadline {
                    k: c.k,
                    n: c.n,
                    deadline: c.deadline,
                    samples: c.points.len(),
                })
                .collect(),
            skipped: &f.skipped,
        })
        .collect();
    json(&doc)
}

pub fn run(args: &FiguresArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let families = families(args, cfg)?;
    for fam in &families {
        for s in &fam.skipped {
            eprintln!("dqm: warning: {} skipped k={} n={}: {}", fam.family_id, s.k, s.n, s.reason);
        }
    }
    let text = match cfg.format {
        Format::Csv => long_table(&families).to_csv(),
        Format::Json => json(&families),
    };
    emit(cfg.output.as_deref(), &text)?;

    let sidecar_path = args.deadlines.clone().or_else(|| {
        cfg.output.as_ref().map(|p| {
            let mut name = p.file_name().unwrap_or_default().to_os_string();
            name.push(".deadlines.json");
            p.with_file_name(name)
        })
    });
    if let Some(path) = sidecar_path {
        emit(Some(&path), &sidecar(&families))?;
    }
    Ok(())
}
