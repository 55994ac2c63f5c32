//! Event-script replay.
//!
//! One event per line, `t n k1,k2,... [w1,w2,...]`; blank lines and `#`
//! comments are skipped. Events must be in non-decreasing time order.

use std::path::PathBuf;

use clap::Args;
use dqm_core::domains::{persistence_report, MemoryRegistry, PersistenceReport, StimulusSpectrum};
use dqm_core::ModelParams;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::grid::real_grid;
use crate::output::{emit, json};

#[derive(Debug, Clone, Args)]
pub struct RegistryArgs {
    /// Event script to replay.
    #[arg(long, value_name = "FILE")]
    pub script: Option<PathBuf>,

    /// Start from an exported registry; its L and c take precedence.
    #[arg(long, value_name = "FILE")]
    pub import: Option<PathBuf>,

    /// Write the final registry as JSON.
    #[arg(long, value_name = "FILE")]
    pub export: Option<PathBuf>,

    /// Report times; defaults to the registry clock after replay.
    #[arg(long)]
    pub at: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t: f64,
    pub spectrum: StimulusSpectrum,
}

pub fn parse_script(text: &str) -> Result<Vec<Event>, CliError> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::usage(format!("script line {}: {msg}", idx + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(at(format!("expected `t n k1,k2,... [w1,w2,...]`, got `{line}`")));
        }
        let t: f64 = fields[0].parse().map_err(|_| at(format!("bad time `{}`", fields[0])))?;
        let n: u64 = fields[1].parse().map_err(|_| at(format!("bad openness `{}`", fields[1])))?;
        let ks = real_grid(fields[2], "k").map_err(|e| at(e.to_string()))?;
        let spectrum = match fields.get(3) {
            Some(ws) => {
                let ws = real_grid(ws, "w").map_err(|e| at(e.to_string()))?;
                StimulusSpectrum::with_weights(n, &ks, &ws)
            }
            None => StimulusSpectrum::new(n, &ks),
        }
        .map_err(|e| at(e.to_string()))?;
        events.push(Event { t, spectrum });
    }
    Ok(events)
}

#[derive(Debug, Serialize)]
pub struct RegistryOutput {
    pub params: ModelParams,
    pub clock: f64,
    pub reports: Vec<PersistenceReport>,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn replay(args: &RegistryArgs, cfg: &RunConfig) -> Result<(MemoryRegistry, RegistryOutput), CliError> {
    if args.script.is_none() && args.import.is_none() {
        return Err(CliError::usage("registry needs --script, --import, or both"));
    }
    let mut reg = match &args.import {
        Some(path) => serde_json::from_str::<MemoryRegistry>(&read(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
        None => MemoryRegistry::new(cfg.params),
    };
    if let Some(path) = &args.script {
        for event in parse_script(&read(path)?)? {
            reg.record_event(event.spectrum, event.t)?;
        }
    }
    let times = match &args.at {
        Some(spec) => real_grid(spec, "at")?,
        None => vec![reg.clock()],
    };
    let reports = times
        .iter()
        .map(|&t| persistence_report(&reg, t))
        .collect::<Result<Vec<_>, _>>()?;
    let out = RegistryOutput {
        params: *reg.params(),
        clock: reg.clock(),
        reports,
    };
    Ok((reg, out))
}

pub fn run(args: &RegistryArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let (reg, out) = replay(args, cfg)?;
    if let Some(path) = &args.export {
        emit(Some(path), &json(&reg))?;
    }
    emit(cfg.output.as_deref(), &json(&out))
}
