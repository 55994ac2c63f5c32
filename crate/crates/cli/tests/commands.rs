use std::path::Path;
use std::process::{Command, Output};

fn dqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqm")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = dqm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn code(args: &[&str]) -> i32 {
    dqm(args).status.code().expect("exited normally")
}

/// Data rows of a CSV document as string cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn f(cell: &str) -> f64 {
    cell.parse().unwrap_or_else(|_| panic!("not a number: {cell}"))
}

#[test]
fn eval_deadline_of_half_e() {
    let out = ok(&["eval", "--formula", "T", "--L", "1", "--omega0", "1.3591409", "--n", "0"]);
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert!((f(&r[0][5]) - 1.0).abs() < 1e-7);
}

#[test]
fn eval_lifetime_starts_at_zero() {
    let out = ok(&["eval", "--formula", "lambda", "--t", "0", "--k", "0.6,1,5", "--n", "0:3"]);
    assert!(rows(&out).iter().all(|r| r[5] == "0.0"));
}

#[test]
fn eval_status_words() {
    let out = ok(&["eval", "--formula", "T", "--L", "2", "--omega0", "1"]);
    assert_eq!(rows(&out)[0][5], "not recordable");
    let out = ok(&["eval", "--formula", "lambda", "--k", "1", "--t", "0.5,5"]);
    let r = rows(&out);
    assert!(f(&r[0][5]) > 0.0);
    assert_eq!(r[1][5], "past deadline");
}

#[test]
fn eval_json_matches_csv() {
    let csv = ok(&["eval", "--formula", "k_tilde", "--n", "0:2", "--t", "0:1:3"]);
    let json = ok(&["eval", "--formula", "k_tilde", "--n", "0:2", "--t", "0:1:3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let values: Vec<f64> = doc.as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    let from_csv: Vec<f64> = rows(&csv).iter().map(|r| f(&r[5])).collect();
    assert_eq!(values, from_csv);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["eval", "--formula", "nope"]), 2);
    assert_eq!(code(&["eval", "--formula", "T", "--k", "-1"]), 2);
    assert_eq!(code(&["eval", "--formula", "T", "--k", "1", "--omega0", "1"]), 2);
    assert_eq!(code(&["sweep", "--ns", "3:1"]), 2);
    assert_eq!(code(&["sweep", "--ks", "0:1:0"]), 2);
    assert_eq!(code(&["trace", "--k", "0.1"]), 2);
    assert_eq!(code(&["registry"]), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# comment\nL = 2\nc = 1\nformat = json\n").unwrap();
    let c = conf.to_str().unwrap();
    let from_file = ok(&["--config", c, "eval", "--formula", "k_tilde"]);
    let doc: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    assert_eq!(doc[0]["value"].as_f64(), Some(1.0));
    let flagged = ok(&["--config", c, "eval", "--formula", "k_tilde", "--L", "4", "--format", "csv"]);
    assert_eq!(rows(&flagged)[0][5], "2.0");

    std::fs::write(&conf, "L = 2\ngamma = 1\n").unwrap();
    let out = dqm(&["--config", c, "eval", "--formula", "T"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}

#[test]
fn sweep_slices_follow_openness() {
    let out = ok(&["sweep", "--ns", "0:8", "--ks", "1,2.5", "--Ls", "0.5,1", "--t", "1.5"]);
    let r = rows(&out);
    assert_eq!(r.len(), 9 * 2 * 2);
    for slice in r.chunks(9) {
        for w in slice.windows(2) {
            assert!(f(&w[1][3]) > f(&w[0][3]), "T along n");
            assert!(f(&w[1][5]) > f(&w[0][5]), "domain size along n");
        }
    }
    assert_eq!(r[0][..3], ["0", "1.0", "0.5"]);
    assert_eq!(r[35][..3], ["8", "2.5", "1.0"]);
}

#[test]
fn sweep_single_point_equals_eval() {
    let sweep = rows(&ok(&["sweep", "--ns", "3", "--ks", "1.7", "--t", "0.8", "--L", "0.9"]));
    let eval = |formula: &str| rows(&ok(&["eval", "--formula", formula, "--k", "1.7", "--n", "3", "--t", "0.8", "--L", "0.9"]))[0][5].clone();
    assert_eq!(sweep[0][3], eval("T"));
    assert_eq!(sweep[0][4], eval("k_tilde"));
    assert_eq!(sweep[0][5], eval("domain_size"));
}

#[test]
fn figures_long_format_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig.csv");
    ok(&["figures", "--ks", "0.4,0.6,1,3", "--points", "50", "-o", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("family_id,k,n,t,lambda\n"));
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig.csv.deadlines.json")).unwrap()).unwrap();
    let fig1 = &side[0];
    assert_eq!(fig1["family_id"], "fig1");
    assert_eq!(fig1["skipped"][0]["k"].as_f64(), Some(0.4));
    let deadlines: Vec<f64> = fig1["curves"].as_array().unwrap().iter().map(|c| c["deadline"].as_f64().unwrap()).collect();
    assert!(deadlines.windows(2).all(|w| w[0] < w[1]));
    let fig2: Vec<f64> = side[1]["curves"].as_array().unwrap().iter().map(|c| c["deadline"].as_f64().unwrap()).collect();
    let gaps: Vec<f64> = fig2.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.iter().all(|g| (g - gaps[0]).abs() < 1e-12 * fig2[fig2.len() - 1]));

    let r = rows(&text);
    let mut prev: Option<&Vec<String>> = None;
    for row in &r {
        let same_curve = prev.is_some_and(|p| p[..3] == row[..3]);
        if same_curve {
            assert!(f(&row[4]) > f(&prev.unwrap()[4]), "lambda increases along a curve");
        } else {
            assert_eq!((f(&row[3]), f(&row[4])), (0.0, 0.0), "curve starts at origin");
        }
        prev = Some(row);
    }
}

fn trace_rows(args: &[&str]) -> Vec<Vec<f64>> {
    rows(&ok(args)).iter().map(|r| r.iter().map(|c| f(c)).collect()).collect()
}

#[test]
fn trace_constant_frequency_run() {
    // n huge: u = e^{-Lt/2} cos(Omega t) with L = 0.5, omega0 = 2.
    let r = trace_rows(&["trace", "--L", "0.5", "--k", "2", "--n", "1000000000", "--init", "1,-0.25,1,0.25", "--t-end", "10", "--points", "101"]);
    let omega = (4.0f64 - 0.0625).sqrt();
    for row in &r {
        let env = (-0.25 * row[0]).exp();
        assert!((row[1] - env * (omega * row[0]).cos()).abs() / env < 1e-6);
    }
}

#[test]
fn trace_bessel_seeded_run_tracks_exact_pair() {
    let out = ok(&["trace", "--k", "3", "--n", "2", "--points", "50"]);
    assert!(out.starts_with("t,u,udot,v,vdot\n"));
    let r: Vec<Vec<f64>> = rows(&out).iter().map(|r| r.iter().map(|c| f(c)).collect()).collect();
    // v / u = e^{Lt} holds for the exact pair, so it holds here to integration accuracy.
    for row in &r {
        if row[1].abs() > 1e-2 {
            assert!((row[3] / row[1] - row[0].exp()).abs() < 1e-6 * row[0].exp());
        }
    }
}

#[test]
fn trace_zero_run_and_r_form() {
    let r = trace_rows(&["trace", "--init", "zero", "--t-end", "2"]);
    assert!(r.iter().all(|row| row[1..].iter().all(|v| *v == 0.0)));
    let out = ok(&["trace", "--form", "r", "--k", "2", "--points", "3"]);
    assert!(out.starts_with("t,r,rdot\n"));
    assert_eq!(rows(&out).len(), 3);
}

#[test]
fn trace_overflow_is_numeric_failure() {
    let out = dqm(&["trace", "--k", "1", "--init", "1,0,1,0", "--t-end", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("last state"));
}

#[test]
fn verify_exit_codes() {
    let out = dqm(&["verify", "--samples", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["summary"]["failed"], 0);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    assert_eq!(code(&["verify", "--samples", "500", "--inject-fault"]), 1);

    let out = dqm(&["verify", "--samples", "500", "--tolerance-scale", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let identity = &doc["checks"][0];
    assert_eq!(identity["pass"], false);
    assert!(identity["measured"].as_f64().unwrap() > 0.0);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn registry_replay_ranks_high_k_first() {
    let dir = tempfile::tempdir().unwrap();
    let script = write(dir.path(), "events.txt", "# low-k then high-k spectrum\n0 1 0.6,0.8 \n0 1 0.7,4,6 1,5,5\n");
    let out = ok(&["registry", "--script", &script, "--at", "0,3"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let first = &doc["reports"][0]["records"];
    assert!(first.as_array().unwrap().iter().all(|r| r["alive_fraction"] == 1.0));
    assert_eq!(first[0]["id"], 1);
    assert!(first[0]["mean_wavelength"].as_f64() < first[1]["mean_wavelength"].as_f64());
    let later = &doc["reports"][1]["records"];
    assert!(later[1]["alive"].as_u64() < first[1]["alive"].as_u64());
}

#[test]
fn registry_clock_regression_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let script = write(dir.path(), "events.txt", "1 0 2\n0.5 0 2\n");
    let out = dqm(&["registry", "--script", &script]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("clock"));
}

#[test]
fn registry_export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let script = write(dir.path(), "events.txt", "0 2 0.25,1,3\n1 0 3,6 1,4\n");
    let export = dir.path().join("reg.json");
    let direct = ok(&["registry", "--script", &script, "--at", "0.5,4", "--export", export.to_str().unwrap()]);
    let replayed = ok(&["registry", "--import", export.to_str().unwrap(), "--at", "0.5,4"]);
    assert_eq!(direct, replayed);
    let more = write(dir.path(), "more.txt", "0.5 0 9\n");
    let out = dqm(&["registry", "--import", export.to_str().unwrap(), "--script", &more]);
    assert_eq!(out.status.code(), Some(2), "appending before the imported clock");
}
