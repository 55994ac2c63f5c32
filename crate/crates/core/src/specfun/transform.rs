//! The substitution `w_{n,l} = M_n(z) x^{-l}`, `z = eps_n x`, `x = exp(-t / alpha_n)`.
//!
//! With `alpha_n = (2n+1) / L` and `eps_n = omega0 alpha_n`, the choice
//! `l = -(n+1)` gives the damped oscillator `u` and `l = n` gives the amplified
//! mirror `v`, both with frequency `omega_n(t)`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{BesselKind, Jet, MAX_ORDER};
use crate::error::{Error, Result};
use crate::formulas::{link_factor, ModelParams, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    pub n: u64,
    /// `alpha_n = (2n + 1) / L`, a time.
    pub alpha: f64,
    /// `eps_n = omega0 (2n + 1) / L`, dimensionless.
    pub epsilon: f64,
}

impl TransformParams {
    pub fn new(mode: &Mode, params: &ModelParams) -> Self {
        let alpha = link_factor(mode.n()) / params.damping();
        TransformParams {
            n: mode.n(),
            alpha,
            epsilon: mode.omega0(params) * alpha,
        }
    }

    pub fn x(&self, t: f64) -> f64 {
        (-t / self.alpha).exp()
    }

    pub fn z(&self, t: f64) -> f64 {
        self.epsilon * self.x(t)
    }

    /// `w_{n,l}(t)` and its time derivatives from `M_n(z(t))` and its
    /// `z`-derivatives. `l` enters only through `x^{-l}` and the chain rule.
    fn w_jet(&self, m: Jet, z: f64, t: f64, l: f64) -> Jet {
        let s = -1.0 / self.alpha;
        let x_pow = (l * t / self.alpha).exp();
        let zm1 = z * m.d1;
        let value = m.value * x_pow;
        let d1 = s * (zm1 - l * m.value) * x_pow;
        let d2 = s * s * (z * z * m.d2 + (1.0 - 2.0 * l) * zm1 + l * l * m.value) * x_pow;
        Jet::new(value, d1, d2)
    }
}

/// The damped solution `u = w_{n,-(n+1)}` and its mirror `v = w_{n,n}`,
/// built from one `M_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPair {
    pub u: Jet,
    pub v: Jet,
}

fn order_of(mode: &Mode) -> Result<u32> {
    u32::try_from(mode.n())
        .ok()
        .filter(|&n| n <= MAX_ORDER)
        .ok_or(Error::Capability {
            order: mode.n().min(u32::MAX as u64) as u32,
            max: MAX_ORDER,
        })
}

/// Exact solution of the oscillator pair at time `t >= 0`.
pub fn analytic_pair(t: f64, kind: &BesselKind, mode: &Mode, params: &ModelParams) -> Result<AnalyticPair> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("t", format!("must be finite and >= 0, got {t}")));
    }
    let order = order_of(mode)?;
    let tp = TransformParams::new(mode, params);
    let z = tp.z(t);
    let m = kind.eval(order, z)?;
    let n = mode.n() as f64;
    Ok(AnalyticPair {
        u: tp.w_jet(m, z, t, -(n + 1.0)),
        v: tp.w_jet(m, z, t, n),
    })
}

/// Harmonic-conjugate amplitude `r = sqrt(2) u e^{Lt/2}`, a solution of
/// `r'' + Omega^2(t) r = 0`.
pub fn conjugate_r(t: f64, kind: &BesselKind, mode: &Mode, params: &ModelParams) -> Result<Jet> {
    let u = analytic_pair(t, kind, mode, params)?.u;
    let l = params.damping();
    let g = SQRT_2 * (0.5 * l * t).exp();
    Ok(Jet::new(
        g * u.value,
        g * (u.d1 + 0.5 * l * u.value),
        g * (u.d2 + l * u.d1 + 0.25 * l * l * u.value),
    ))
}

/// `r(t)` computed from `u` and from `v` independently.
pub fn conjugate_r_routes(t: f64, kind: &BesselKind, mode: &Mode, params: &ModelParams) -> Result<(f64, f64)> {
    let pair = analytic_pair(t, kind, mode, params)?;
    let half = 0.5 * params.damping() * t;
    Ok((SQRT_2 * pair.u.value * half.exp(), SQRT_2 * pair.v.value * (-half).exp()))
}
