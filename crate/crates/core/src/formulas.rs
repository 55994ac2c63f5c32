//! Closed-form evaluators: relaxing frequency, recording deadline, infrared
//! threshold, coherence-domain size and mode lifetime.
//!
//! Every function here is pure. Throughout, `a = L / (2n + 1)` is the
//! relaxation rate of the frequency for openness `n`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_sinh, one_minus_exp_neg};

/// Proportionality constant between the cutoff wavelength and `1 / k_threshold`.
pub const WAVELENGTH_SCALE: f64 = TAU;

/// Global physical parameters: damping `L` (1/time) and propagation speed `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    damping: f64,
    speed: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "L")]
    damping: f64,
    c: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.damping, raw.c)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            damping: p.damping,
            c: p.speed,
        }
    }
}

impl ModelParams {
    pub fn new(damping: f64, speed: f64) -> Result<Self> {
        if !(damping.is_finite() && damping > 0.0) {
            return Err(Error::param("L", format!("must be finite and > 0, got {damping}")));
        }
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::param("c", format!("must be finite and > 0, got {speed}")));
        }
        Ok(ModelParams { damping, speed })
    }

    /// Damping coefficient `L`.
    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// Propagation speed `c`.
    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Base infrared threshold `k0 = L / (2c)`.
    pub fn k0(&self) -> f64 {
        self.damping / (2.0 * self.speed)
    }

    /// Relaxation rate `L / (2n + 1)`.
    pub fn rate(&self, n: u64) -> f64 {
        self.damping / link_factor(n)
    }
}

/// `2n + 1` as a float.
pub fn link_factor(n: u64) -> f64 {
    2.0 * n as f64 + 1.0
}

/// A `(k, n)` pair: wavenumber and openness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMode")]
pub struct Mode {
    k: f64,
    n: u64,
}

#[derive(Deserialize)]
struct RawMode {
    k: f64,
    n: u64,
}

impl TryFrom<RawMode> for Mode {
    type Error = Error;

    fn try_from(raw: RawMode) -> Result<Self> {
        Mode::new(raw.k, raw.n)
    }
}

impl Mode {
    pub fn new(k: f64, n: u64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::param("k", format!("must be finite and > 0, got {k}")));
        }
        Ok(Mode { k, n })
    }

    /// Builds the mode whose bare frequency `k c` equals `omega0`.
    pub fn from_omega0(omega0: f64, n: u64, params: &ModelParams) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::param("omega0", format!("must be finite and > 0, got {omega0}")));
        }
        Mode::new(omega0 / params.speed(), n)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn with_n(&self, n: u64) -> Self {
        Mode { k: self.k, n }
    }

    /// Bare frequency `omega0 = k c`.
    pub fn omega0(&self, params: &ModelParams) -> f64 {
        self.k * params.speed()
    }

    /// `2 omega0 / L`; the mode can record iff this exceeds one.
    pub fn reality_ratio(&self, params: &ModelParams) -> f64 {
        2.0 * self.omega0(params) / params.damping()
    }
}

/// Time window in which a mode's frequency `Omega` stays real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordingWindow {
    pub deadline: Option<f64>,
}

impl RecordingWindow {
    pub fn recordable(&self) -> bool {
        self.deadline.is_some()
    }

    /// Whether `t` lies in the closed window `[0, T]`.
    pub fn contains(&self, t: f64) -> bool {
        matches!(self.deadline, Some(d) if (0.0..=d).contains(&t))
    }
}

/// Infrared threshold and coherence-domain size at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSnapshot {
    pub t: f64,
    pub k_threshold: f64,
    pub domain_size: f64,
}

impl DomainSnapshot {
    pub fn at(n: u64, t: f64, params: &ModelParams) -> Result<Self> {
        let k_threshold = k_threshold(n, t, params)?;
        Ok(DomainSnapshot {
            t,
            k_threshold,
            domain_size: WAVELENGTH_SCALE / k_threshold,
        })
    }
}

/// Relaxing frequency `omega0 * exp(-L t / (2n + 1))`. Defined for any finite `t`.
pub fn omega_n(t: f64, n: u64, omega0: f64, params: &ModelParams) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain("t", format!("must be finite, got {t}")));
    }
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::param("omega0", format!("must be finite and > 0, got {omega0}")));
    }
    Ok(omega0 * (-params.rate(n) * t).exp())
}

/// Signed squared frequency `Omega^2 = omega_n(t)^2 - L^2 / 4` of the
/// parametric oscillator. Negative once the mode is past its deadline.
pub fn capital_omega_sq(t: f64, mode: &Mode, params: &ModelParams) -> f64 {
    let w = mode.omega0(params) * (-params.rate(mode.n()) * t).exp();
    let half_l = 0.5 * params.damping();
    w * w - half_l * half_l
}

/// Real root of [`capital_omega_sq`], or `None` when it is negative.
pub fn capital_omega(t: f64, mode: &Mode, params: &ModelParams) -> Option<f64> {
    let sq = capital_omega_sq(t, mode, params);
    (sq >= 0.0).then(|| sq.sqrt())
}

/// Recording deadline `T = ((2n + 1) / L) ln(2 omega0 / L)`.
///
/// A ratio `2 omega0 / L` of exactly one gives a zero-length window and is
/// classified as not recordable.
pub fn recording_deadline(mode: &Mode, params: &ModelParams) -> RecordingWindow {
    let ratio = mode.reality_ratio(params);
    if ratio <= 1.0 {
        return RecordingWindow { deadline: None };
    }
    // (2n+1) * (ln q / L) keeps successive differences in n exact to rounding.
    let per_link = ratio.ln() / params.damping();
    RecordingWindow {
        deadline: Some(link_factor(mode.n()) * per_link),
    }
}

/// Infrared threshold `k~(n, t) = (L / 2c) exp(L t / (2n + 1))` for `t >= 0`.
pub fn k_threshold(n: u64, t: f64, params: &ModelParams) -> Result<f64> {
    check_elapsed(t)?;
    Ok(params.k0() * (params.rate(n) * t).exp())
}

/// Coherence-domain size `2 pi / k~(n, t)`.
pub fn domain_size(n: u64, t: f64, params: &ModelParams) -> Result<f64> {
    domain_size_scaled(n, t, params, WAVELENGTH_SCALE)
}

/// Coherence-domain size with an explicit proportionality constant.
pub fn domain_size_scaled(n: u64, t: f64, params: &ModelParams, scale: f64) -> Result<f64> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::param("scale", format!("must be finite and > 0, got {scale}")));
    }
    Ok(scale / k_threshold(n, t, params)?)
}

fn check_elapsed(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn deadline_for(t: f64, mode: &Mode, params: &ModelParams) -> Result<f64> {
    check_elapsed(t)?;
    let deadline = recording_deadline(mode, params)
        .deadline
        .ok_or(Error::NotRecordable {
            k: mode.k(),
            n: mode.n(),
            ratio: mode.reality_ratio(params),
        })?;
    if t >= deadline {
        return Err(Error::PastDeadline { t, deadline });
    }
    Ok(deadline)
}

/// Mode lifetime `Lambda_{k,n}(t)`, defined through
///
/// ```text
/// exp(-2 Lambda) = exp(-a t) sinh(a (T - t)) / sinh(a T),   a = L / (2n + 1)
/// ```
///
/// on `0 <= t < T`. `Lambda(0) = 0` and `Lambda` diverges at `T`, which is
/// reported as [`Error::PastDeadline`].
pub fn lifetime_lambda(t: f64, mode: &Mode, params: &ModelParams) -> Result<f64> {
    let deadline = deadline_for(t, mode, params)?;
    let a = params.rate(mode.n());
    // exp(-2 Lambda) = 1 - rho with rho = (1 - e^{-2at}) / (1 - e^{-2aT}).
    let rho = one_minus_exp_neg(2.0 * a * t) / one_minus_exp_neg(2.0 * a * deadline);
    if rho <= 0.5 {
        return Ok(-0.5 * (-rho).ln_1p());
    }
    let remaining = a * (deadline - t);
    Ok(0.5 * (a * t + ln_sinh(a * deadline) - ln_sinh(remaining)))
}

/// `Omega(0) exp(-Lambda(t))`, the lifetime form of the parametric frequency.
pub fn omega_via_lambda(t: f64, mode: &Mode, params: &ModelParams) -> Result<f64> {
    let lambda = lifetime_lambda(t, mode, params)?;
    // Recordable modes have Omega(0)^2 > 0.
    let omega_at_origin = capital_omega_sq(0.0, mode, params).max(0.0).sqrt();
    Ok(omega_at_origin * (-lambda).exp())
}
