//! Lifetime curve families: `Lambda_{k,n}(t)` for several `k` at fixed `n`,
//! and for several `n` at fixed `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{lifetime_lambda, recording_deadline, ModelParams, Mode};

/// Curves stop once `Lambda` exceeds this value.
pub const DEFAULT_LAMBDA_MAX: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TimeGrid {
    /// One grid of non-negative, strictly increasing times for every curve.
    Shared(Vec<f64>),
    /// `points` uniform samples of `[0, T_{k,n})` for each curve.
    PerCurve { points: usize },
}

impl TimeGrid {
    fn validate(&self) -> Result<()> {
        match self {
            TimeGrid::Shared(ts) => {
                if ts.is_empty() {
                    return Err(Error::param("t_grid", "must not be empty"));
                }
                if ts.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                    return Err(Error::param("t_grid", "times must be finite and >= 0"));
                }
                if ts.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::param("t_grid", "times must be strictly increasing"));
                }
            }
            TimeGrid::PerCurve { points } => {
                if *points == 0 {
                    return Err(Error::param("t_grid", "need at least one point per curve"));
                }
            }
        }
        Ok(())
    }

    fn times(&self, deadline: f64) -> Vec<f64> {
        match self {
            TimeGrid::Shared(ts) => ts.clone(),
            TimeGrid::PerCurve { points } => (0..*points)
                .map(|i| deadline * i as f64 / *points as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeCurve {
    pub k: f64,
    pub n: u64,
    /// Divergence abscissa `T_{k,n}`.
    pub deadline: f64,
    /// `(t, Lambda)` pairs with `t < T` and `Lambda <= lambda_max`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCurve {
    pub k: f64,
    pub n: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFamily {
    pub family_id: String,
    pub curves: Vec<LifetimeCurve>,
    pub skipped: Vec<SkippedCurve>,
}

fn check_lambda_max(lambda_max: f64) -> Result<()> {
    if !(lambda_max > 0.0) {
        return Err(Error::param("lambda_max", format!("must be > 0, got {lambda_max}")));
    }
    Ok(())
}

fn curve(mode: &Mode, params: &ModelParams, grid: &TimeGrid, lambda_max: f64) -> Result<Option<LifetimeCurve>> {
    let Some(deadline) = recording_deadline(mode, params).deadline else {
        return Ok(None);
    };
    let mut points = Vec::new();
    for t in grid.times(deadline) {
        if t >= deadline {
            break;
        }
        let lambda = lifetime_lambda(t, mode, params)?;
        if lambda > lambda_max {
            break;
        }
        points.push((t, lambda));
    }
    Ok(Some(LifetimeCurve {
        k: mode.k(),
        n: mode.n(),
        deadline,
        points,
    }))
}

fn family(id: &str, modes: Vec<Mode>, params: &ModelParams, grid: &TimeGrid, lambda_max: f64) -> Result<CurveFamily> {
    grid.validate()?;
    check_lambda_max(lambda_max)?;
    let mut out = CurveFamily {
        family_id: id.to_string(),
        curves: Vec::new(),
        skipped: Vec::new(),
    };
    for mode in modes {
        match curve(&mode, params, grid, lambda_max)? {
            Some(c) => out.curves.push(c),
            None => out.skipped.push(SkippedCurve {
                k: mode.k(),
                n: mode.n(),
                reason: format!(
                    "not recordable: 2*omega0/L = {} <= 1",
                    mode.reality_ratio(params)
                ),
            }),
        }
    }
    Ok(out)
}

/// Lifetime curves for each `k` in `ks` at fixed openness `n`.
pub fn fig1_curves(ks: &[f64], n: u64, params: &ModelParams, grid: &TimeGrid, lambda_max: f64) -> Result<CurveFamily> {
    let modes = ks.iter().map(|&k| Mode::new(k, n)).collect::<Result<Vec<_>>>()?;
    family("fig1", modes, params, grid, lambda_max)
}

/// Lifetime curves for each `n` in `ns` at fixed wavenumber `k`.
pub fn fig2_curves(ns: &[u64], k: f64, params: &ModelParams, grid: &TimeGrid, lambda_max: f64) -> Result<CurveFamily> {
    let modes = ns.iter().map(|&n| Mode::new(k, n)).collect::<Result<Vec<_>>>()?;
    family("fig2", modes, params, grid, lambda_max)
}
