//! Shared fixtures for the kernel benchmarks.

use dqm_core::formulas::recording_deadline;
use dqm_core::specfun::analytic_pair;
use dqm_core::{BesselKind, ModelParams, Mode, OscillatorSystem, SystemForm};

pub fn unit_params() -> ModelParams {
    ModelParams::new(1.0, 1.0).expect("valid constants")
}

/// Log-spaced Bessel arguments in `[0.1, 100]`.
pub fn bessel_arguments(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| 0.1 * 1000f64.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Times spread over `[0, 0.99 T)` of `mode`.
pub fn lifetime_times(mode: &Mode, params: &ModelParams, count: usize) -> Vec<f64> {
    let deadline = recording_deadline(mode, params).deadline.expect("recordable fixture");
    (0..count).map(|i| 0.99 * deadline * i as f64 / count as f64).collect()
}

/// Damped pair seeded with the exact solution, integrated to 90% of its deadline.
pub struct PairRun {
    pub system: OscillatorSystem,
    pub init: [f64; 4],
    pub t_end: f64,
}

pub fn pair_run(n: u64) -> PairRun {
    let params = unit_params();
    let mode = Mode::new(3.0, n).expect("valid mode");
    let p = analytic_pair(0.0, &BesselKind::First, &mode, &params).expect("order in range");
    PairRun {
        system: OscillatorSystem::new(SystemForm::DampedPair, mode, params),
        init: [p.u.value, p.u.d1, p.v.value, p.v.d1],
        t_end: 0.9 * recording_deadline(&mode, &params).deadline.expect("recordable"),
    }
}
