//! Numerical integration of the damped/amplified pair and of the parametric
//! oscillator, plus residual certification of candidate solutions.

mod dopri;
mod residual;

pub use dopri::OVERFLOW_GUARD;
pub use residual::{energy_like_diagnostic, residual, residual_of_jet, Equation, RESIDUAL_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{ModelParams, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemForm {
    /// State `(u, u', v, v')`.
    DampedPair,
    /// State `(r, r')`.
    ParametricR,
}

impl SystemForm {
    pub fn dim(self) -> usize {
        match self {
            SystemForm::DampedPair => 4,
            SystemForm::ParametricR => 2,
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            SystemForm::DampedPair => &["u", "udot", "v", "vdot"],
            SystemForm::ParametricR => &["r", "rdot"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSystem {
    pub form: SystemForm,
    pub mode: Mode,
    pub params: ModelParams,
}

impl OscillatorSystem {
    pub fn new(form: SystemForm, mode: Mode, params: ModelParams) -> Self {
        OscillatorSystem { form, mode, params }
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// `omega_n(t)^2`.
    pub fn omega_sq(&self, t: f64) -> f64 {
        let w = self.mode.omega0(&self.params) * (-self.params.rate(self.mode.n()) * t).exp();
        w * w
    }

    pub fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let w2 = self.omega_sq(t);
        let l = self.params.damping();
        match self.form {
            SystemForm::DampedPair => {
                dy[0] = y[1];
                dy[1] = -l * y[1] - w2 * y[0];
                dy[2] = y[3];
                dy[3] = l * y[3] - w2 * y[2];
            }
            SystemForm::ParametricR => {
                dy[0] = y[1];
                dy[1] = -(w2 - 0.25 * l * l) * y[0];
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub dense_output: bool,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            dense_output: false,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorConfig {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn dense(mut self) -> Self {
        self.dense_output = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 1e-15 && v < 1e-2) {
                return Err(Error::param(name, format!("must lie in (1e-15, 1e-2), got {v}")));
            }
        }
        if !(self.max_step > 0.0) {
            return Err(Error::param("max_step", format!("must be > 0, got {}", self.max_step)));
        }
        if self.max_steps == 0 {
            return Err(Error::param("max_steps", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegrationStats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    /// Largest absolute local error estimate over accepted steps.
    pub max_local_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct DenseSegment {
    t0: f64,
    h: f64,
    coeffs: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [c0, c1, c2, c3, c4] = &self.coeffs;
        (0..c0.len())
            .map(|i| c0[i] + theta * (c1[i] + theta1 * (c2[i] + theta * (c3[i] + theta1 * c4[i]))))
            .collect()
    }
}

/// Accepted-step samples of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stats: IntegrationStats,
    dense: Vec<DenseSegment>,
}

impl Trajectory {
    fn start(t0: f64, init: &[f64]) -> Self {
        Trajectory {
            samples: vec![Sample {
                t: t0,
                state: init.to_vec(),
            }],
            stats: IntegrationStats::default(),
            dense: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.samples[0].state.len()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }

    pub fn has_dense_output(&self) -> bool {
        !self.dense.is_empty()
    }

    /// State at `t` from the continuous extension. `None` without dense
    /// output or outside the integrated span.
    pub fn interpolate(&self, t: f64) -> Option<Vec<f64>> {
        let first = self.dense.first()?;
        let last = self.dense.last()?;
        if t < first.t0 || t > last.t0 + last.h {
            return None;
        }
        let idx = self.dense.partition_point(|seg| seg.t0 + seg.h < t);
        Some(self.dense[idx.min(self.dense.len() - 1)].eval(t))
    }

    /// Dense-output samples on a caller-supplied grid.
    pub fn resample(&self, grid: &[f64]) -> Option<Vec<Sample>> {
        grid.iter()
            .map(|&t| self.interpolate(t).map(|state| Sample { t, state }))
            .collect()
    }
}

fn check_request(system: &OscillatorSystem, init: &[f64], t_span: (f64, f64)) -> Result<()> {
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t0 >= 0.0 && t1 > t0) {
        return Err(Error::domain("t_span", format!("need 0 <= t0 < t1, got ({t0}, {t1})")));
    }
    if init.len() != system.dim() {
        return Err(Error::param(
            "init",
            format!("expected {} components, got {}", system.dim(), init.len()),
        ));
    }
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("init", "components must be finite"));
    }
    Ok(())
}

/// Adaptive Dormand-Prince 5(4) integration over `t_span`.
pub fn integrate(
    system: &OscillatorSystem,
    init: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_request(system, init, t_span)?;
    dopri::solve(|t, y, dy| system.rhs(t, y, dy), init, t_span.0, t_span.1, cfg)
}

/// The same Dormand-Prince stages at a fixed step `(t1 - t0) / steps`.
pub fn integrate_fixed_step(
    system: &OscillatorSystem,
    init: &[f64],
    t_span: (f64, f64),
    steps: usize,
) -> Result<Trajectory> {
    check_request(system, init, t_span)?;
    if steps == 0 {
        return Err(Error::param("steps", "must be positive"));
    }
    dopri::solve_fixed(|t, y, dy| system.rhs(t, y, dy), init, t_span.0, t_span.1, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(form: SystemForm, n: u64) -> OscillatorSystem {
        let params = ModelParams::new(0.5, 1.0).unwrap();
        OscillatorSystem::new(form, Mode::new(2.0, n).unwrap(), params)
    }

    #[test]
    fn zero_state_stays_zero() {
        let sys = system(SystemForm::DampedPair, 2);
        let traj = integrate(&sys, &[0.0; 4], (0.0, 5.0), &IntegratorConfig::default()).unwrap();
        assert!(traj.samples.iter().all(|s| s.state.iter().all(|&v| v == 0.0)));
        assert_eq!(traj.last().t, 5.0);
    }

    #[test]
    fn sample_times_strictly_increase() {
        let sys = system(SystemForm::DampedPair, 1);
        let traj = integrate(&sys, &[1.0, 0.0, 1.0, 0.0], (0.5, 4.0), &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.samples[0].t, 0.5);
        assert_eq!(traj.samples[0].state, vec![1.0, 0.0, 1.0, 0.0]);
        assert!(traj.times().zip(traj.times().skip(1)).all(|(a, b)| b > a));
        assert!(traj.stats.steps > 0);
        assert!(traj.stats.max_local_error > 0.0);
    }

    #[test]
    fn rejects_bad_requests() {
        let sys = system(SystemForm::ParametricR, 1);
        let cfg = IntegratorConfig::default();
        assert!(integrate(&sys, &[1.0, 0.0], (1.0, 1.0), &cfg).is_err());
        assert!(integrate(&sys, &[1.0, 0.0], (-1.0, 1.0), &cfg).is_err());
        assert!(integrate(&sys, &[1.0, 0.0, 0.0], (0.0, 1.0), &cfg).is_err());
        assert!(integrate(&sys, &[f64::NAN, 0.0], (0.0, 1.0), &cfg).is_err());
        let loose = IntegratorConfig::with_tolerances(0.1, 1e-12);
        assert!(integrate(&sys, &[1.0, 0.0], (0.0, 1.0), &loose).is_err());
        let tight = IntegratorConfig::with_tolerances(1e-16, 1e-12);
        assert!(integrate(&sys, &[1.0, 0.0], (0.0, 1.0), &tight).is_err());
    }

    #[test]
    fn amplified_branch_trips_overflow_guard() {
        let params = ModelParams::new(50.0, 1.0).unwrap();
        let sys = OscillatorSystem::new(SystemForm::DampedPair, Mode::new(30.0, 0).unwrap(), params);
        let err = integrate(&sys, &[1.0, 0.0, 1.0, 0.0], (0.0, 20.0), &IntegratorConfig::default()).unwrap_err();
        match err {
            Error::Integration { last_state, t, .. } => {
                assert_eq!(last_state.len(), 4);
                assert!(t > 0.0);
                assert!(last_state.iter().all(|v| v.abs() <= OVERFLOW_GUARD));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dense_output_hits_step_endpoints() {
        let sys = system(SystemForm::ParametricR, 3);
        let cfg = IntegratorConfig::default().dense();
        let traj = integrate(&sys, &[1.0, 0.0], (0.0, 3.0), &cfg).unwrap();
        for s in traj.samples.iter().skip(1) {
            let y = traj.interpolate(s.t).unwrap();
            for (a, b) in y.iter().zip(&s.state) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        assert!(traj.interpolate(3.5).is_none());
        let plain = integrate(&sys, &[1.0, 0.0], (0.0, 3.0), &IntegratorConfig::default()).unwrap();
        assert!(plain.interpolate(1.0).is_none());
    }
}
