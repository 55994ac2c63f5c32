use serde::{Deserialize, Serialize};

use super::{OscillatorSystem, SystemForm, Trajectory};
use crate::error::{Error, Result};
use crate::formulas::{ModelParams, Mode};
use crate::specfun::Jet;

/// Lower bound of the residual normalization.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Which second-order equation a candidate is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    /// `x'' + L x' + omega_n^2 x = 0`
    Damped,
    /// `x'' - L x' + omega_n^2 x = 0`
    Amplified,
    /// `x'' + (omega_n^2 - L^2/4) x = 0`
    Parametric,
}

/// Normalized residual of `jet` (value and time derivatives at `t`) in `eq`.
pub fn residual_of_jet(eq: Equation, mode: &Mode, params: &ModelParams, jet: Jet, t: f64) -> f64 {
    let l = params.damping();
    let w = mode.omega0(params) * (-params.rate(mode.n()) * t).exp();
    let (friction, stiffness) = match eq {
        Equation::Damped => (l, w * w),
        Equation::Amplified => (-l, w * w),
        Equation::Parametric => (0.0, w * w - 0.25 * l * l),
    };
    let a = jet.d2;
    let b = friction * jet.d1;
    let c = stiffness * jet.value;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(RESIDUAL_FLOOR);
    (a + b + c).abs() / scale
}

/// Normalized residual `|x'' +/- L x' + Omega^2 x| / max(|x''|, |L x'|, |Omega^2 x|, floor)`
/// of a candidate solution supplying analytic derivatives.
pub fn residual<F>(system: &OscillatorSystem, eq: Equation, candidate: F, t: f64) -> f64
where
    F: Fn(f64) -> Jet,
{
    residual_of_jet(eq, &system.mode, &system.params, candidate(t), t)
}

/// `E(t) = r'^2 / 2 + Omega^2(t) r^2 / 2` per sample of a parametric-form run.
pub fn energy_like_diagnostic(traj: &Trajectory, system: &OscillatorSystem) -> Result<Vec<f64>> {
    if system.form != SystemForm::ParametricR || traj.dim() != 2 {
        return Err(Error::Usage(
            "energy diagnostic needs a trajectory of the parametric (r, r') form".into(),
        ));
    }
    let quarter_l2 = 0.25 * system.params.damping().powi(2);
    Ok(traj
        .samples
        .iter()
        .map(|s| {
            let (r, rdot) = (s.state[0], s.state[1]);
            let omega_sq = system.omega_sq(s.t) - quarter_l2;
            0.5 * rdot * rdot + 0.5 * omega_sq * r * r
        })
        .collect())
}
