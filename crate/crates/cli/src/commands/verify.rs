//! Self-verification suite. Every check reports the worst error it measured
//! next to the tolerance it was held to.

use clap::Args;
use dqm_core::formulas::{
    capital_omega_sq, k_threshold, lifetime_lambda, omega_n, recording_deadline,
};
use dqm_core::integrator::{energy_like_diagnostic, integrate, residual_of_jet, Equation};
use dqm_core::specfun::{analytic_pair, conjugate_r, conjugate_r_routes, sph_bessel_j, sph_bessel_y};
use dqm_core::{BesselKind, IntegratorConfig, ModelParams, Mode, OscillatorSystem, SystemForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{emit, json};

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random samples for the identity and equivalence checks.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,

    /// Multiplies every tolerance; values below 1 tighten the suite.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,

    /// Perturb the lifetime by one part in 1e6 inside the identity check, to
    /// exercise the failure path.
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub summary: Summary,
}

/// `(z, j0, j1, y0)` at 40 significant digits.
#[allow(clippy::excessive_precision)]
const ANCHORS: &[(f64, f64, f64, f64)] = &[
    (0.001, 0.999999833333341667, 0.00033333330000000119, -999.999500000041667),
    (0.1, 0.998334166468281523, 0.0333000119025575697, -9.95004165278025766),
    (0.7, 0.920310981768130077, 0.222098277833773786, -1.09263169612069775),
    (1.0, 0.841470984807896507, 0.301168678939756789, -0.540302305868139717),
    (2.5, 0.239388857641582598, 0.416212989275406525, 0.320457446218773486),
    (6.0, -0.0465692496998209788, -0.167789922725031167, -0.160028381108394337),
    (13.0, 0.032320541294356994, -0.0673174030889107092, -0.0698035985730920165),
    (34.0, 0.0155612554741183477, 0.0254156332429036334, 0.0249579492583707408),
    (100.0, -0.00506365641109758794, -0.00867382528698781522, -0.00862318872287683934),
];

const TRANSFORM_ORDERS: [u64; 5] = [0, 1, 2, 5, 10];

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

fn sampled_mode(rng: &mut ChaCha8Rng) -> (ModelParams, Mode) {
    let l = rng.gen_range(0.1..5.0);
    let c = rng.gen_range(0.2..5.0);
    let q: f64 = rng.gen_range(1.2..50.0);
    let n = rng.gen_range(0..200u64);
    let params = ModelParams::new(l, c).expect("sampled in range");
    (params, Mode::new(q * l / (2.0 * c), n).expect("sampled in range"))
}

fn identity(samples: usize, seed: u64, fault: bool) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (params, mode) = sampled_mode(&mut rng);
        let deadline = recording_deadline(&mode, &params).deadline.expect("q > 1");
        let t = rng.gen_range(0.0..0.99) * deadline;
        let mut lambda = lifetime_lambda(t, &mode, &params)?;
        if fault {
            lambda *= 1.0 + 1e-6;
        }
        let lhs = capital_omega_sq(t, &mode, &params);
        let rhs = capital_omega_sq(0.0, &mode, &params) * (-2.0 * lambda).exp();
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(worst)
}

/// Count of samples where `t <= T` and `k >= k~(n, t)` disagree.
fn equivalence(samples: usize, seed: u64) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut mismatches = 0usize;
    let mut tested = 0usize;
    while tested < samples {
        let params = ModelParams::new(rng.gen_range(0.1..5.0), rng.gen_range(0.2..5.0)).expect("in range");
        let q: f64 = rng.gen_range(0.2..20.0);
        let mode = Mode::new(q * params.damping() / (2.0 * params.speed()), rng.gen_range(0..100u64))
            .expect("in range");
        let t = rng.gen_range(0.0..50.0);
        let threshold = k_threshold(mode.n(), t, &params)?;
        let window = recording_deadline(&mode, &params);
        let near_t = window.deadline.is_some_and(|d| (t - d).abs() <= 1e-12 * d.max(1.0));
        if near_t || (mode.k() - threshold).abs() <= 1e-12 * threshold {
            continue;
        }
        tested += 1;
        if window.contains(t) != (mode.k() >= threshold) {
            mismatches += 1;
        }
    }
    Ok(mismatches as f64)
}

fn anchors() -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for &(z, j0, j1, y0) in ANCHORS {
        worst = worst
            .max(rel(sph_bessel_j(0, z)?.value, j0))
            .max(rel(sph_bessel_j(1, z)?.value, j1))
            .max(rel(sph_bessel_y(0, z)?.value, y0));
    }
    Ok(worst)
}

fn wronskian() -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for n in 0..=20u32 {
        for i in 0..=60 {
            let z = 0.1 * 1000f64.powf(i as f64 / 60.0);
            let j = BesselKind::First.eval(n, z)?;
            let y = BesselKind::Second.eval(n, z)?;
            worst = worst.max(((j.value * y.d1 - j.d1 * y.value) * z * z - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Modes used by the transform checks: `2 omega0 / L = 6` for each order.
fn transform_modes(params: &ModelParams) -> Result<Vec<Mode>, CliError> {
    let k = 3.0 * params.damping() / params.speed();
    TRANSFORM_ORDERS
        .iter()
        .map(|&n| Mode::new(k, n).map_err(CliError::from))
        .collect()
}

fn grid(mode: &Mode, params: &ModelParams, points: usize) -> Vec<f64> {
    let t_end = 0.9 * recording_deadline(mode, params).deadline.expect("q = 6");
    (0..=points).map(|i| t_end * i as f64 / points as f64).collect()
}

struct TransformErrors {
    residual_u: f64,
    residual_v: f64,
    residual_r: f64,
    ratio: f64,
    routes: f64,
}

fn transform(params: &ModelParams) -> Result<TransformErrors, CliError> {
    let mut e = TransformErrors {
        residual_u: 0.0,
        residual_v: 0.0,
        residual_r: 0.0,
        ratio: 0.0,
        routes: 0.0,
    };
    let kind = BesselKind::First;
    for mode in transform_modes(params)? {
        for t in grid(&mode, params, 200) {
            let pair = analytic_pair(t, &kind, &mode, params)?;
            e.residual_u = e.residual_u.max(residual_of_jet(Equation::Damped, &mode, params, pair.u, t));
            e.residual_v = e.residual_v.max(residual_of_jet(Equation::Amplified, &mode, params, pair.v, t));
            e.ratio = e.ratio.max(rel(pair.v.value / pair.u.value, (params.damping() * t).exp()));
            let r = conjugate_r(t, &kind, &mode, params)?;
            e.residual_r = e.residual_r.max(residual_of_jet(Equation::Parametric, &mode, params, r, t));
            let (via_u, via_v) = conjugate_r_routes(t, &kind, &mode, params)?;
            e.routes = e.routes.max(rel(via_u, via_v));
        }
    }
    Ok(e)
}

/// Adaptive solution against the exact pair, mixed norm with a floor of
/// 1e-3 of the largest magnitude on the grid.
fn numeric_vs_analytic(params: &ModelParams, icfg: &IntegratorConfig) -> Result<f64, CliError> {
    let kind = BesselKind::First;
    let mut worst: f64 = 0.0;
    for mode in transform_modes(params)? {
        let p0 = analytic_pair(0.0, &kind, &mode, params)?;
        let sys = OscillatorSystem::new(SystemForm::DampedPair, mode, *params);
        let ts = grid(&mode, params, 400);
        let t_end = *ts.last().expect("non-empty grid");
        let traj = integrate(&sys, &[p0.u.value, p0.u.d1, p0.v.value, p0.v.d1], (0.0, t_end), &icfg.dense())?;
        let exact = ts
            .iter()
            .map(|&t| analytic_pair(t, &kind, &mode, params))
            .collect::<Result<Vec<_>, _>>()?;
        let u_scale = exact.iter().map(|p| p.u.value.abs()).fold(0.0, f64::max);
        let v_scale = exact.iter().map(|p| p.v.value.abs()).fold(0.0, f64::max);
        for (&t, p) in ts.iter().zip(&exact) {
            let y = traj
                .interpolate(t)
                .ok_or_else(|| CliError::Numeric("dense output does not cover the grid".into()))?;
            worst = worst
                .max((y[0] - p.u.value).abs() / p.u.value.abs().max(1e-3 * u_scale))
                .max((y[2] - p.v.value).abs() / p.v.value.abs().max(1e-3 * v_scale));
        }
    }
    Ok(worst)
}

const CLOSED_N: u64 = 1_000_000_000;

fn closed_limit_frequency(params: &ModelParams) -> Result<f64, CliError> {
    let omega0 = 2.0 * params.damping();
    let mut worst: f64 = 0.0;
    for i in 0..=1000 {
        let t = 10.0 * i as f64 / 1000.0;
        worst = worst.max((omega_n(t, CLOSED_N, omega0, params)? - omega0).abs() / omega0);
    }
    Ok(worst)
}

fn closed_limit_energy(params: &ModelParams, icfg: &IntegratorConfig) -> Result<f64, CliError> {
    let mode = Mode::new(2.0 * params.damping() / params.speed(), CLOSED_N)?;
    let sys = OscillatorSystem::new(SystemForm::ParametricR, mode, *params);
    let traj = integrate(&sys, &[1.0, 0.0], (0.0, 10.0), icfg)?;
    let e = energy_like_diagnostic(&traj, &sys)?;
    Ok(e.iter().map(|v| (v - e[0]).abs()).fold(0.0, f64::max) / e[0].abs())
}

pub fn report(args: &VerifyArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    if args.samples == 0 {
        return Err(CliError::usage("samples: must be positive"));
    }
    if !(args.tolerance_scale.is_finite() && args.tolerance_scale > 0.0) {
        return Err(CliError::usage("tolerance-scale: must be finite and > 0"));
    }
    let params = &cfg.params;
    let t = transform(params)?;
    let measured = [
        ("omega_identity", identity(args.samples, cfg.seed, args.inject_fault)?, 1e-11),
        ("reality_equivalence_mismatches", equivalence(args.samples, cfg.seed)?, 0.0),
        ("bessel_anchors", anchors()?, 1e-13),
        ("wronskian", wronskian()?, 1e-10),
        ("residual_u", t.residual_u, 1e-8),
        ("residual_v", t.residual_v, 1e-8),
        ("residual_r", t.residual_r, 1e-8),
        ("ratio_v_over_u", t.ratio, 1e-10),
        ("conjugate_routes", t.routes, 1e-10),
        ("numeric_vs_analytic", numeric_vs_analytic(params, &cfg.integrator)?, 1e-6),
        ("closed_limit_frequency", closed_limit_frequency(params)?, 1e-8),
        ("closed_limit_energy", closed_limit_energy(params, &cfg.integrator)?, 1e-6),
    ];
    let checks: Vec<Check> = measured
        .into_iter()
        .map(|(name, measured, tol)| {
            let tolerance = tol * args.tolerance_scale;
            Check {
                name,
                measured,
                tolerance,
                pass: measured <= tolerance,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = Summary {
        total: checks.len(),
        passed,
        failed: checks.len() - passed,
        seed: cfg.seed,
        samples: args.samples,
    };
    Ok(Report { checks, summary })
}

pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let report = report(args, cfg)?;
    emit(cfg.output.as_deref(), &json(&report))?;
    match report.summary.failed {
        0 => Ok(()),
        failed => Err(CliError::VerifyFailed { failed }),
    }
}
