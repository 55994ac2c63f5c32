//! Run configuration: a flat `key = value` file overridden by flags.
//!
//! ```text
//! # model
//! L = 1.0
//! c = 1.0
//! # integrator
//! rel_tol = 1e-9
//! abs_tol = 1e-12
//! # output and sampled checks
//! format = csv
//! seed = 7
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown or repeated keys are
//! errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dqm_core::{IntegratorConfig, ModelParams};
use serde::Serialize;

use crate::error::CliError;

pub const KEYS: [&str; 6] = ["L", "c", "rel_tol", "abs_tol", "format", "seed"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub integrator: IntegratorConfig,
    pub format: Format,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

/// Values given on the command line; `None` falls back to the file, then to
/// the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub damping: Option<f64>,
    pub speed: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

/// Parses the text of a configuration file into its raw entries.
pub fn parse_file_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {lineno}: expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!(
                "line {lineno}: unknown key `{key}` (known: {})",
                KEYS.join(", ")
            )));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Config(format!("line {lineno}: key `{key}` given twice")));
        }
    }
    Ok(entries)
}

fn file_value<T: std::str::FromStr>(entries: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    entries
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Config(format!("`{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> Result<Self, CliError> {
        let entries = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_file_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let format = match flags.format {
            Some(f) => f,
            None => match entries.get("format") {
                Some(v) => Format::from_str(v, false)
                    .map_err(|_| CliError::Config(format!("`format`: expected csv or json, got `{v}`")))?,
                None => Format::default(),
            },
        };
        let damping = flags.damping.or(file_value(&entries, "L")?).unwrap_or(1.0);
        let speed = flags.speed.or(file_value(&entries, "c")?).unwrap_or(1.0);
        let defaults = IntegratorConfig::default();
        let rel_tol = flags.rel_tol.or(file_value(&entries, "rel_tol")?).unwrap_or(defaults.rel_tol);
        let abs_tol = flags.abs_tol.or(file_value(&entries, "abs_tol")?).unwrap_or(defaults.abs_tol);
        let seed = flags.seed.or(file_value(&entries, "seed")?).unwrap_or(0);

        let params = ModelParams::new(damping, speed).map_err(|e| CliError::Config(e.to_string()))?;
        let integrator = IntegratorConfig::with_tolerances(rel_tol, abs_tol);
        integrator.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(RunConfig {
            params,
            integrator,
            format,
            seed,
            output: flags.output,
        })
    }
}
