use clap::{Args, ValueEnum};
use dqm_core::formulas::recording_deadline;
use dqm_core::integrator::integrate;
use dqm_core::specfun::{analytic_pair, conjugate_r};
use dqm_core::{BesselKind, Mode, OscillatorSystem, SystemForm};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::grid::real_grid;
use crate::output::{emit, json, num};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Damped u and mirror v: columns t,u,udot,v,vdot.
    Pair,
    /// Conjugate amplitude r: columns t,r,rdot.
    R,
}

impl Form {
    fn system(self) -> SystemForm {
        match self {
            Form::Pair => SystemForm::DampedPair,
            Form::R => SystemForm::ParametricR,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[arg(long, value_enum, default_value = "pair")]
    pub form: Form,

    #[arg(long, default_value_t = 1.0)]
    pub k: f64,

    #[arg(long, default_value_t = 0)]
    pub n: u64,

    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,

    /// End time; defaults to 90% of the recording deadline.
    #[arg(long)]
    pub t_end: Option<f64>,

    /// `bessel` (exact solution values at t_start), `zero`, or explicit comma-separated state.
    #[arg(long, default_value = "bessel", allow_hyphen_values = true)]
    pub init: String,

    /// Bessel solution for `--init bessel`: `j`, `y`, or coefficients `A,B` of A j_n + B y_n.
    #[arg(long, default_value = "j", allow_hyphen_values = true)]
    pub kind: String,

    /// Resample on this many uniform points via dense output instead of printing accepted steps.
    #[arg(long)]
    pub points: Option<usize>,
}

fn parse_kind(spec: &str) -> Result<BesselKind, CliError> {
    match spec.trim() {
        "j" => Ok(BesselKind::First),
        "y" => Ok(BesselKind::Second),
        other => match real_grid(other, "kind")?[..] {
            [a, b] => Ok(BesselKind::combination(a, b)?),
            _ => Err(CliError::usage(format!("kind: expected j, y or A,B, got `{other}`"))),
        },
    }
}

fn initial_state(args: &TraceArgs, mode: &Mode, cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let form = args.form.system();
    match args.init.trim() {
        "zero" => Ok(vec![0.0; form.dim()]),
        "bessel" => {
            let kind = parse_kind(&args.kind)?;
            Ok(match form {
                SystemForm::DampedPair => {
                    let p = analytic_pair(args.t_start, &kind, mode, &cfg.params)?;
                    vec![p.u.value, p.u.d1, p.v.value, p.v.d1]
                }
                SystemForm::ParametricR => {
                    let r = conjugate_r(args.t_start, &kind, mode, &cfg.params)?;
                    vec![r.value, r.d1]
                }
            })
        }
        list => {
            let state = real_grid(list, "init")?;
            if state.len() != form.dim() {
                return Err(CliError::usage(format!(
                    "init: expected {} values ({}), got {}",
                    form.dim(),
                    form.columns().join(","),
                    state.len()
                )));
            }
            Ok(state)
        }
    }
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    columns: Vec<&'a str>,
    rows: Vec<Vec<f64>>,
    steps: usize,
    rejected: usize,
}

pub fn run(args: &TraceArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let mode = Mode::new(args.k, args.n)?;
    let form = args.form.system();
    let t_end = match args.t_end {
        Some(t) => t,
        None => {
            let deadline = recording_deadline(&mode, &cfg.params).deadline.ok_or_else(|| {
                CliError::usage("mode is not recordable; pass --t-end explicitly")
            })?;
            0.9 * deadline
        }
    };
    let init = initial_state(args, &mode, cfg)?;
    let system = OscillatorSystem::new(form, mode, cfg.params);
    let mut icfg = cfg.integrator;
    icfg.dense_output = args.points.is_some();
    let traj = integrate(&system, &init, (args.t_start, t_end), &icfg)?;

    let rows: Vec<Vec<f64>> = match args.points {
        Some(0 | 1) => return Err(CliError::usage("points: need at least 2")),
        Some(points) => {
            let span = t_end - args.t_start;
            let grid: Vec<f64> = (0..points)
                .map(|i| {
                    if i + 1 == points {
                        t_end
                    } else {
                        args.t_start + span * i as f64 / (points - 1) as f64
                    }
                })
                .collect();
            traj.resample(&grid)
                .ok_or_else(|| CliError::Numeric("dense output does not cover the grid".into()))?
                .into_iter()
                .map(|s| std::iter::once(s.t).chain(s.state).collect())
                .collect()
        }
        None => traj
            .samples
            .iter()
            .map(|s| std::iter::once(s.t).chain(s.state.iter().copied()).collect())
            .collect(),
    };

    let mut columns = vec!["t"];
    columns.extend_from_slice(form.columns());
    let text = match cfg.format {
        Format::Csv => {
            let mut out = columns.join(",");
            out.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => json(&TraceDoc {
            columns,
            rows,
            steps: traj.stats.steps,
            rejected: traj.stats.rejected,
        }),
    };
    emit(cfg.output.as_deref(), &text)
}
