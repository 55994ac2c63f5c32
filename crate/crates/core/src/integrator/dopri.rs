//! Dormand-Prince 5(4) with proportional-integral step control and the
//! standard fourth-order continuous extension.

use super::{DenseSegment, IntegrationStats, IntegratorConfig, Sample, Trajectory};
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

/// Components above this magnitude abort the run.
pub const OVERFLOW_GUARD: f64 = 1e150;

struct Stages {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y1: Vec<f64>,
}

impl Stages {
    fn new(dim: usize) -> Self {
        Stages {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
            y1: vec![0.0; dim],
        }
    }

    /// One step from `(t, y)` with `k[0] = f(t, y)` already filled. Leaves the
    /// fifth-order result in `y1` and `f(t + h, y1)` in `k[6]`.
    fn step<F>(&mut self, rhs: &F, t: f64, y: &[f64], h: f64)
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let dim = y.len();
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let tmp = &mut self.tmp;
        for i in 0..dim {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, tmp, k2);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, tmp, k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, tmp, k4);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, tmp, k5);
        for i in 0..dim {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, tmp, k6);
        for i in 0..dim {
            self.y1[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(t + h, &self.y1, k7);
    }

    fn error_component(&self, i: usize, h: f64) -> f64 {
        let k = &self.k;
        h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i])
    }

    fn dense(&self, t0: f64, h: f64, y: &[f64]) -> DenseSegment {
        let dim = y.len();
        let k = &self.k;
        let mut coeffs: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; dim]);
        for i in 0..dim {
            let ydiff = self.y1[i] - y[i];
            let bspl = h * k[0][i] - ydiff;
            coeffs[0][i] = y[i];
            coeffs[1][i] = ydiff;
            coeffs[2][i] = bspl;
            coeffs[3][i] = ydiff - h * k[6][i] - bspl;
            coeffs[4][i] = h
                * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
        }
        DenseSegment { t0, h, coeffs }
    }
}

fn guard(t: f64, y: &[f64], candidate: &[f64]) -> Result<()> {
    if let Some(bad) = candidate.iter().find(|v| !v.is_finite() || v.abs() > OVERFLOW_GUARD) {
        return Err(Error::Integration {
            reason: format!("state magnitude {bad:e} exceeds overflow guard {OVERFLOW_GUARD:e}"),
            t,
            last_state: y.to_vec(),
        });
    }
    Ok(())
}

fn initial_step<F>(rhs: &F, t: f64, y: &[f64], f0: &[f64], cfg: &IntegratorConfig, span: f64) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y.len();
    let scale = |v: f64| cfg.abs_tol + cfg.rel_tol * v.abs();
    let dnf: f64 = (0..dim).map(|i| (f0[i] / scale(y[i])).powi(2)).sum::<f64>() / dim as f64;
    let dny: f64 = (0..dim).map(|i| (y[i] / scale(y[i])).powi(2)).sum::<f64>() / dim as f64;
    let hmax = cfg.max_step.min(span);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(hmax);
    let y1: Vec<f64> = (0..dim).map(|i| y[i] + h * f0[i]).collect();
    let mut f1 = vec![0.0; dim];
    rhs(t + h, &y1, &mut f1);
    let der2 = ((0..dim).map(|i| ((f1[i] - f0[i]) / scale(y[i])).powi(2)).sum::<f64>() / dim as f64).sqrt() / h;
    let der12 = der2.abs().max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(hmax)
}

pub(super) fn solve<F>(rhs: F, init: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = init.len();
    let mut st = Stages::new(dim);
    let mut y = init.to_vec();
    let mut t = t0;
    rhs(t, &y, &mut st.k[0]);

    let mut traj = Trajectory::start(t0, init);
    let mut stats = IntegrationStats {
        rhs_evals: 1,
        ..Default::default()
    };

    let mut h = initial_step(&rhs, t, &y, &st.k[0].clone(), cfg, t1 - t0);
    stats.rhs_evals += 1;
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let expo = 0.2 - BETA * 0.75;

    loop {
        if stats.steps + stats.rejected >= cfg.max_steps {
            return Err(Error::Integration {
                reason: format!("step budget of {} exhausted", cfg.max_steps),
                t,
                last_state: y,
            });
        }
        if 0.1 * h.abs() <= t.abs() * f64::EPSILON || h < f64::MIN_POSITIVE {
            return Err(Error::Integration {
                reason: format!("step size underflow (h = {h:e})"),
                t,
                last_state: y,
            });
        }
        let last = t + 1.01 * h >= t1;
        if last {
            h = t1 - t;
        }

        st.step(&rhs, t, &y, h);
        stats.rhs_evals += 6;
        guard(t, &y, &st.y1)?;

        let mut sum = 0.0;
        let mut worst: f64 = 0.0;
        for (i, (y0, y1)) in y.iter().zip(&st.y1).enumerate() {
            let e = st.error_component(i, h);
            let sk = cfg.abs_tol + cfg.rel_tol * y0.abs().max(y1.abs());
            sum += (e / sk).powi(2);
            worst = worst.max(e.abs());
        }
        let err = (sum / dim as f64).sqrt();
        let fac11 = err.powf(expo);

        if err <= 1.0 {
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            fac_old = err.max(1e-4);
            stats.steps += 1;
            stats.max_local_error = stats.max_local_error.max(worst);
            if cfg.dense_output {
                traj.dense.push(st.dense(t, h, &y));
            }
            let t_next = if last { t1 } else { t + h };
            y.copy_from_slice(&st.y1);
            let (first, rest) = st.k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            t = t_next;
            traj.samples.push(Sample {
                t,
                state: y.clone(),
            });
            if last {
                break;
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new.min(cfg.max_step);
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    traj.stats = stats;
    Ok(traj)
}

/// Fixed-step integration without error control; used for convergence studies.
pub(super) fn solve_fixed<F>(rhs: F, init: &[f64], t0: f64, t1: f64, steps: usize) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = init.len();
    let mut st = Stages::new(dim);
    let mut y = init.to_vec();
    let h = (t1 - t0) / steps as f64;
    let mut traj = Trajectory::start(t0, init);
    rhs(t0, &y, &mut st.k[0]);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        st.step(&rhs, t, &y, h);
        guard(t, &y, &st.y1)?;
        y.copy_from_slice(&st.y1);
        let (first, rest) = st.k.split_at_mut(1);
        first[0].copy_from_slice(&rest[5]);
        let t_next = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        traj.samples.push(Sample {
            t: t_next,
            state: y.clone(),
        });
    }
    traj.stats.steps = steps;
    traj.stats.rhs_evals = 1 + 6 * steps;
    Ok(traj)
}
