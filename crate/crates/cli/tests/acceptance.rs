//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use dqm_core::domains::{fig1_curves, fig2_curves, persistence_report, CurveFamily, MemoryRegistry, StimulusSpectrum, TimeGrid};
use dqm_core::formulas::{capital_omega_sq, k_threshold, lifetime_lambda, omega_n, recording_deadline};
use dqm_core::integrator::{energy_like_diagnostic, integrate, integrate_fixed_step, residual_of_jet, Equation};
use dqm_core::specfun::{analytic_pair, sph_bessel_j, sph_bessel_y};
use dqm_core::{BesselKind, IntegratorConfig, ModelParams, Mode, OscillatorSystem, SystemForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SAMPLES: usize = 20_000;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let params = ModelParams::new(rng.gen_range(0.1..5.0), rng.gen_range(0.2..5.0)).unwrap();
        let q: f64 = rng.gen_range(1.2..50.0);
        let mode = Mode::new(q * params.damping() / (2.0 * params.speed()), rng.gen_range(0..200u64)).unwrap();
        let t = rng.gen_range(0.0..=0.99) * recording_deadline(&mode, &params).deadline.unwrap();
        // Left side straight from the relaxing frequency, right side from the lifetime.
        let w = omega_n(t, mode.n(), mode.omega0(&params), &params).unwrap();
        let lhs = w * w - 0.25 * params.damping() * params.damping();
        let lambda = lifetime_lambda(t, &mode, &params).map_err(|e| e.to_string())?;
        let rhs = capital_omega_sq(0.0, &mode, &params) * (-2.0 * lambda).exp();
        worst = worst.max(rel(lhs, rhs));
    }
    ensure(worst <= 1e-11, || format!("max rel err {worst:e} > 1e-11"))?;
    Ok(format!("max rel err {worst:.2e} over {SAMPLES} samples (tol 1e-11)"))
}

fn equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut tested, mut excluded, mut both_sides) = (0usize, 0usize, [0usize; 2]);
    while tested < SAMPLES {
        let params = ModelParams::new(rng.gen_range(0.1..5.0), rng.gen_range(0.2..5.0)).unwrap();
        let q: f64 = rng.gen_range(0.2..20.0);
        let mode = Mode::new(q * params.damping() / (2.0 * params.speed()), rng.gen_range(0..100u64)).unwrap();
        let t = rng.gen_range(0.0..50.0);
        let threshold = k_threshold(mode.n(), t, &params).unwrap();
        let window = recording_deadline(&mode, &params);
        let near_t = window.deadline.is_some_and(|d| (t - d).abs() <= 1e-12 * d.max(1.0));
        if near_t || (mode.k() - threshold).abs() <= 1e-12 * threshold {
            excluded += 1;
            continue;
        }
        tested += 1;
        let inside = window.contains(t);
        both_sides[inside as usize] += 1;
        ensure(inside == (mode.k() >= threshold), || {
            format!("mismatch at k={}, n={}, t={t}, L={}, c={}", mode.k(), mode.n(), params.damping(), params.speed())
        })?;
    }
    ensure(both_sides.iter().all(|&c| c > SAMPLES / 20), || format!("one-sided sample {both_sides:?}"))?;
    Ok(format!("{tested} samples agree ({} inside, {} outside, {excluded} boundary excluded)", both_sides[1], both_sides[0]))
}

/// `(z, j0, j1, y0)` at 40 significant digits.
#[allow(clippy::excessive_precision)]
const ANCHORS: &[(f64, f64, f64, f64)] = &[
    (0.001, 0.999999833333341667, 0.00033333330000000119, -999.999500000041667),
    (0.01, 0.999983333416666468, 0.0033333000001190474, -99.9950000416665278),
    (0.1, 0.998334166468281523, 0.0333000119025575697, -9.95004165278025766),
    (0.3, 0.985067355537798584, 0.0991028880406418801, -3.18445496375202007),
    (1.0, 0.841470984807896507, 0.301168678939756789, -0.540302305868139717),
    (2.5, 0.239388857641582598, 0.416212989275406525, 0.320457446218773486),
    (6.0, -0.0465692496998209788, -0.167789922725031167, -0.160028381108394337),
    (13.0, 0.032320541294356994, -0.0673174030889107092, -0.0698035985730920165),
    (34.0, 0.0155612554741183477, 0.0254156332429036334, 0.0249579492583707408),
    (100.0, -0.00506365641109758794, -0.00867382528698781522, -0.00862318872287683934),
];

fn bessel() -> Outcome {
    let mut anchor: f64 = 0.0;
    for &(z, j0, j1, y0) in ANCHORS {
        anchor = anchor
            .max(rel(sph_bessel_j(0, z).unwrap().value, j0))
            .max(rel(sph_bessel_j(1, z).unwrap().value, j1))
            .max(rel(sph_bessel_y(0, z).unwrap().value, y0));
    }
    ensure(anchor <= 1e-13, || format!("anchor rel err {anchor:e} > 1e-13"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut wr: f64 = 0.0;
    let grid = (0..=20u32).flat_map(|n| (0..=200).map(move |i| (n, 0.1 * 1000f64.powf(i as f64 / 200.0))));
    let random: Vec<(u32, f64)> = (0..SAMPLES)
        .map(|_| (rng.gen_range(0..=20u32), rng.gen_range(0.1f64.ln()..100f64.ln()).exp()))
        .collect();
    for (n, z) in grid.chain(random) {
        let j = BesselKind::First.eval(n, z).unwrap();
        let y = BesselKind::Second.eval(n, z).unwrap();
        wr = wr.max(((j.value * y.d1 - j.d1 * y.value) * z * z - 1.0).abs());
    }
    ensure(wr <= 1e-10, || format!("Wronskian rel err {wr:e} > 1e-10"))?;
    Ok(format!("anchors {anchor:.2e} (tol 1e-13), Wronskian {wr:.2e} (tol 1e-10)"))
}

const ORDERS: [u64; 5] = [0, 1, 2, 5, 10];

fn pair_setup() -> (ModelParams, Vec<Mode>) {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    (params, ORDERS.iter().map(|&n| Mode::new(3.0, n).unwrap()).collect())
}

fn grid(mode: &Mode, params: &ModelParams, points: usize) -> Vec<f64> {
    let t_end = 0.9 * recording_deadline(mode, params).deadline.unwrap();
    (0..=points).map(|i| t_end * i as f64 / points as f64).collect()
}

fn transform() -> Outcome {
    let (params, modes) = pair_setup();
    let (mut res, mut ratio) = (0.0f64, 0.0f64);
    for mode in &modes {
        for t in grid(mode, &params, 500) {
            let p = analytic_pair(t, &BesselKind::First, mode, &params).unwrap();
            res = res
                .max(residual_of_jet(Equation::Damped, mode, &params, p.u, t))
                .max(residual_of_jet(Equation::Amplified, mode, &params, p.v, t));
            ratio = ratio.max(rel(p.v.value / p.u.value, (params.damping() * t).exp()));
        }
    }
    ensure(res < 1e-8, || format!("residual {res:e} >= 1e-8"))?;
    ensure(ratio <= 1e-10, || format!("v/u error {ratio:e} > 1e-10"))?;
    Ok(format!("residual {res:.2e} (tol 1e-8), v/u vs e^(Lt) {ratio:.2e} (tol 1e-10)"))
}

fn numeric() -> Outcome {
    let (params, modes) = pair_setup();
    let mut worst: f64 = 0.0;
    for mode in &modes {
        let p0 = analytic_pair(0.0, &BesselKind::First, mode, &params).unwrap();
        let ts = grid(mode, &params, 400);
        let sys = OscillatorSystem::new(SystemForm::DampedPair, *mode, params);
        let cfg = IntegratorConfig::with_tolerances(1e-9, 1e-12).dense();
        let traj = integrate(&sys, &[p0.u.value, p0.u.d1, p0.v.value, p0.v.d1], (0.0, *ts.last().unwrap()), &cfg)
            .map_err(|e| e.to_string())?;
        let exact: Vec<_> = ts.iter().map(|&t| analytic_pair(t, &BesselKind::First, mode, &params).unwrap()).collect();
        let su = exact.iter().map(|p| p.u.value.abs()).fold(0.0, f64::max);
        let sv = exact.iter().map(|p| p.v.value.abs()).fold(0.0, f64::max);
        for (&t, p) in ts.iter().zip(&exact) {
            let y = traj.interpolate(t).unwrap();
            worst = worst
                .max((y[0] - p.u.value).abs() / p.u.value.abs().max(1e-3 * su))
                .max((y[2] - p.v.value).abs() / p.v.value.abs().max(1e-3 * sv));
        }
    }
    ensure(worst <= 1e-6, || format!("mixed error {worst:e} > 1e-6"))?;

    // Constant-frequency benchmark, u = e^{-Lt/2} cos(Omega t).
    let params = ModelParams::new(0.5, 1.0).unwrap();
    let sys = OscillatorSystem::new(SystemForm::DampedPair, Mode::new(2.0, 1_000_000_000).unwrap(), params);
    let omega = (4.0f64 - 0.0625).sqrt();
    let errs: Vec<f64> = [20usize, 40, 80]
        .iter()
        .map(|&steps| {
            let traj = integrate_fixed_step(&sys, &[1.0, -0.25, 1.0, 0.25], (0.0, 10.0), steps).unwrap();
            traj.samples
                .iter()
                .map(|s| (s.state[0] - (-0.25 * s.t).exp() * (omega * s.t).cos()).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let order = errs.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
    ensure(order >= 4.0, || format!("observed order {order:.3} < 4 (errors {errs:?})"))?;
    Ok(format!("mixed error {worst:.2e} (tol 1e-6), observed order {order:.2} (min 4)"))
}

fn check_family(fam: &CurveFamily) -> Result<(), String> {
    for c in &fam.curves {
        ensure(c.points.first() == Some(&(0.0, 0.0)), || format!("{} k={} n={} does not start at origin", fam.family_id, c.k, c.n))?;
        ensure(c.points.windows(2).all(|w| w[1].1 > w[0].1), || format!("{} k={} n={} not increasing", fam.family_id, c.k, c.n))?;
    }
    ensure(fam.curves.windows(2).all(|w| w[0].deadline < w[1].deadline), || format!("{} deadlines not increasing", fam.family_id))
}

fn figures() -> Outcome {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let grid = TimeGrid::PerCurve { points: 400 };
    let fig1 = fig1_curves(&[0.55, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0], 2, &params, &grid, 30.0).map_err(|e| e.to_string())?;
    let ns: Vec<u64> = (0..=30).collect();
    let fig2 = fig2_curves(&ns, 2.0, &params, &grid, 30.0).map_err(|e| e.to_string())?;
    check_family(&fig1)?;
    check_family(&fig2)?;
    ensure(fig1.curves.len() == 8 && fig2.curves.len() == 31, || "curves unexpectedly skipped".into())?;
    let ds: Vec<f64> = fig2.curves.iter().map(|c| c.deadline).collect();
    let step = ds[1] - ds[0];
    let spread = ds.windows(2).map(|w| ((w[1] - w[0]) - step).abs()).fold(0.0, f64::max);
    let limit = 4.0 * f64::EPSILON * ds[ds.len() - 1];
    ensure(spread <= limit, || format!("successor differences spread {spread:e} > {limit:e}"))?;
    Ok(format!(
        "{} + {} curves start at (0,0), increase, deadlines ordered; T step spread {spread:.1e} (limit {limit:.1e})",
        fig1.curves.len(),
        fig2.curves.len()
    ))
}

fn closed_limit() -> Outcome {
    let params = ModelParams::new(0.5, 1.0).unwrap();
    let n = 1_000_000_000u64;
    let omega0 = 2.0;
    let mut freq: f64 = 0.0;
    for i in 0..=10_000 {
        let t = 10.0 * i as f64 / 10_000.0;
        freq = freq.max((omega_n(t, n, omega0, &params).unwrap() - omega0).abs() / omega0);
    }
    ensure(freq < 1e-8, || format!("frequency drift {freq:e} >= 1e-8"))?;
    let sys = OscillatorSystem::new(SystemForm::ParametricR, Mode::new(2.0, n).unwrap(), params);
    let traj = integrate(&sys, &[1.0, 0.0], (0.0, 10.0), &IntegratorConfig::default()).map_err(|e| e.to_string())?;
    let e = energy_like_diagnostic(&traj, &sys).map_err(|e| e.to_string())?;
    let drift = e.iter().map(|v| (v - e[0]).abs()).fold(0.0, f64::max) / e[0];
    ensure(drift < 1e-6, || format!("energy drift {drift:e} >= 1e-6"))?;
    Ok(format!("frequency drift {freq:.2e} (tol 1e-8), energy drift {drift:.2e} (tol 1e-6)"))
}

fn registry() -> Outcome {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..500 {
        let n = rng.gen_range(0..10u64);
        let ks: Vec<f64> = (0..rng.gen_range(1..10)).map(|_| rng.gen_range(0.2..8.0)).collect();
        let spectrum = StimulusSpectrum::new(n, &ks).unwrap();
        let (t1, t2) = (rng.gen_range(0.0..3.0), rng.gen_range(3.0..6.0));
        let mut reg = MemoryRegistry::new(params);
        let early = reg.record_event(spectrum.clone(), t1).unwrap().id;
        let late = reg.record_event(spectrum, t2).unwrap().id;
        let (a, b) = (reg.get(early).unwrap(), reg.get(late).unwrap());
        ensure(b.modes.iter().all(|m| a.modes.iter().any(|o| o.mode.k() == m.mode.k())), || format!("trial {trial}: later record gained a mode"))?;
        let mut prev = reg.alive_modes(early, t1).unwrap();
        for step in 1..=60 {
            let now = reg.alive_modes(early, t1 + 0.5 * step as f64).unwrap();
            ensure(now.iter().all(|m| prev.contains(m)), || format!("trial {trial}: alive set grew"))?;
            prev = now;
        }
    }
    // A spectrum populated by high k outlives and out-localizes a low-k one.
    let mut reg = MemoryRegistry::new(params);
    reg.record_event(StimulusSpectrum::with_weights(2, &[0.6, 0.8, 3.0], &[5.0, 5.0, 1.0]).unwrap(), 0.0).unwrap();
    reg.record_event(StimulusSpectrum::with_weights(2, &[0.6, 4.0, 6.0], &[1.0, 5.0, 5.0]).unwrap(), 0.0).unwrap();
    for t in [0.0, 1.0, 3.0] {
        let report = persistence_report(&reg, t).unwrap();
        let (top, other) = (&report.records[0], &report.records[1]);
        ensure(top.id.0 == 1, || format!("t={t}: high-k record not ranked first"))?;
        ensure(top.mean_wavelength < other.mean_wavelength, || format!("t={t}: high-k record not more localized"))?;
    }
    Ok("500 randomized trials monotone; high-k record ranks first and most localized".into())
}

fn dqm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dqm")).args(args).output().expect("binary runs")
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "L = 0.8\nc = 1.2\nrel_tol = 1e-10\nabs_tol = 1e-13\nseed = 42\n").unwrap();
    let script = dir.path().join("events.txt");
    std::fs::write(&script, "0 1 0.5,1,2,4\n0.5 3 1,3 2,1\n2 0 6\n").unwrap();
    let (conf, script) = (conf.to_str().unwrap().to_string(), script.to_str().unwrap().to_string());
    let commands: Vec<Vec<&str>> = vec![
        vec!["eval", "--formula", "lambda", "--k", "0.5:4:8", "--n", "0:3", "--t", "0:2:9"],
        vec!["trace", "--k", "2", "--n", "3"],
        vec!["trace", "--form", "r", "--k", "2", "--n", "1", "--points", "64"],
        vec!["verify", "--samples", "3000"],
        vec!["figures", "--points", "64"],
        vec!["sweep", "--ns", "0:40", "--ks", "0.3:5:12", "--Ls", "0.5,1,2", "--t", "0.7"],
        vec!["registry", "--script", &script, "--at", "0,1,3,10"],
        vec!["--format", "json", "sweep", "--ns", "0:5"],
    ];
    for cmd in &commands {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("out{run}"));
            let mut args = vec!["--config", conf.as_str(), "-o", path.to_str().unwrap()];
            args.extend(cmd);
            let out = dqm(&args);
            ensure(out.status.success(), || format!("{cmd:?} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
            outputs.push(std::fs::read(&path).unwrap());
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{cmd:?} output differs between runs"))?;
    }
    let clean = dqm(&["--config", &conf, "verify"]).status.code();
    let faulty = dqm(&["--config", &conf, "verify", "--inject-fault"]);
    ensure(clean == Some(0), || format!("clean verify exited {clean:?}"))?;
    ensure(faulty.status.code() == Some(1), || format!("faulted verify exited {:?}", faulty.status.code()))?;
    let doc: serde_json::Value = serde_json::from_slice(&faulty.stdout).map_err(|e| e.to_string())?;
    ensure(doc["summary"]["failed"].as_u64() >= Some(1), || "fault not reported in JSON".into())?;
    Ok(format!("{} commands byte-identical across runs; verify exits 0 clean, 1 under fault", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact lifetime identity", identity),
        ("reality-condition equivalence", equivalence),
        ("Bessel certification", bessel),
        ("transform exactness", transform),
        ("numeric vs analytic", numeric),
        ("figure semantics", figures),
        ("closed-system limit", closed_limit),
        ("registry monotonicity", registry),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
