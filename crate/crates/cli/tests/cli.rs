//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn pressctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pressctl"))
        .args(args)
        .output()
        .expect("spawn pressctl")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parses the single data row of a one-row table into named columns.
fn single_row(text: &str) -> Vec<(String, String)> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(lines.next(), None, "expected exactly one data row");
    assert_eq!(header.len(), row.len());
    header
        .iter()
        .zip(&row)
        .map(|(h, c)| (h.to_string(), c.to_string()))
        .collect()
}

fn column(row: &[(String, String)], name: &str) -> String {
    row.iter()
        .find(|(h, _)| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
        .clone()
}

#[test]
fn simulate_emits_expected_row_count_and_is_deterministic() {
    let args = ["simulate", "--beta", "2", "--w0", "0.55", "--steps-per-delay", "100", "--horizon", "10"];
    let a = pressctl(&args);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,u");
    assert_eq!(lines.len(), 1002, "header plus 1001 samples");
    let b = pressctl(&args);
    assert_eq!(a.stdout, b.stdout, "same flags must give byte-identical output");
}

#[test]
fn simulate_zero_w0_gives_zero_column() {
    let text = stdout(&pressctl(&["simulate", "--beta", "2", "--w0", "0", "--horizon", "3"]));
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(1), Some("0"), "line {line:?}");
    }
}

#[test]
fn simulate_rejects_short_horizon() {
    let out = pressctl(&["simulate", "--beta", "2", "--w0", "0.5", "--horizon", "0.5"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}

#[test]
fn threshold_single_beta_matches_reference() {
    let text = stdout(&pressctl(&["threshold", "--beta", "5", "--tol", "1e-4"]));
    let row = single_row(&text);
    let g: f64 = column(&row, "g").parse().unwrap();
    assert!((g - 0.826).abs() < 0.03, "g = {g}");
    let lo: f64 = column(&row, "lo").parse().unwrap();
    let hi: f64 = column(&row, "hi").parse().unwrap();
    assert!(lo <= g && g <= hi && hi - lo <= 1e-4);
}

#[test]
fn threshold_grid_is_non_decreasing() {
    let text = stdout(&pressctl(&[
        "threshold",
        "--beta-grid",
        "2:20:5log",
        "--steps-per-delay",
        "100",
        "--horizon",
        "100",
    ]));
    let gs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gs.len(), 5);
    assert!(gs.windows(2).all(|w| w[0] <= w[1]), "{gs:?}");
}

#[test]
fn threshold_rejects_zero_tol() {
    assert_eq!(exit_code(&pressctl(&["threshold", "--beta", "5", "--tol", "0"])), 2);
}

#[test]
fn fit_recovers_exact_power_law_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.csv");
    let mut text = String::from("beta,g\n");
    for i in 0..10 {
        let beta = 4.0 * 1.5f64.powi(i);
        let g = 1.0 - 0.5 * beta.powf(-0.8);
        text.push_str(&format!("{beta},{g}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let out = stdout(&pressctl(&["fit", "--input", path.to_str().unwrap()]));
    let row = single_row(&out);
    let a: f64 = column(&row, "a").parse().unwrap();
    let p: f64 = column(&row, "p").parse().unwrap();
    assert!((a - 0.5).abs() < 1e-9, "a = {a}");
    assert!((p - 0.8).abs() < 1e-9, "p = {p}");
    assert_eq!(column(&row, "beta_min"), "4");
}

#[test]
fn fit_rejects_single_point_and_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.csv");
    std::fs::write(&single, "beta,g\n5,0.8\n").unwrap();
    let out = pressctl(&["fit", "--input", single.to_str().unwrap(), "--beta-min", "0"]);
    assert_eq!(exit_code(&out), 2);

    let garbage = dir.path().join("garbage.csv");
    std::fs::write(&garbage, "beta,g\n5,0.8\nnot,numeric\n").unwrap();
    let out = pressctl(&["fit", "--input", garbage.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);

    let out = pressctl(&["fit"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn press_reproduces_stall_row() {
    let text = stdout(&pressctl(&["press", "--ell", "1000", "--beta-list", "50", "--problem", "2"]));
    let row = single_row(&text);
    let t1: f64 = column(&row, "t_within_1").parse().unwrap();
    assert_eq!(t1, 141.0);
    assert_eq!(column(&row, "t_within_01"), "", "0.1 criterion is never met");
    let gap: f64 = column(&row, "stall_gap").parse().unwrap();
    assert!((0.1..=0.3).contains(&gap), "gap = {gap}");
}

#[test]
fn press_both_emits_baseline_plus_beta_rows_with_ratios() {
    let text = stdout(&pressctl(&[
        "press", "--ell", "100", "--tau", "40", "--vmax", "10", "--dt", "0.5", "--beta-list",
        "2,5,10,50", "--problem", "both",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header, problem-1 row, four problem-2 rows");
    let p1: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(p1[1], "1");
    assert_eq!(p1[8], "1", "problem-1 ratio against itself");
    let base_t1: f64 = p1[5].parse().unwrap();
    let b5: Vec<&str> = lines[3].split(',').collect();
    let t1: f64 = b5[5].parse().unwrap();
    let ratio: f64 = b5[8].parse().unwrap();
    assert_eq!(b5[2], "5");
    assert!((ratio - t1 / base_t1).abs() < 1e-12, "ratio recomputed from times");
    // Problem-2 times weakly decrease in beta at eps = 1.
    let times: Vec<f64> = lines[2..]
        .iter()
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(times.windows(2).all(|w| w[1] <= w[0]), "{times:?}");
}

#[test]
fn press_rejects_dt_not_below_tau() {
    let out = pressctl(&["press", "--ell", "100", "--dt", "50", "--tau", "40", "--beta-list", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn blowup_rate_agrees_with_theory() {
    let text = stdout(&pressctl(&["blowup", "--beta", "2", "--w0", "0.8", "--steps-per-delay", "4000"]));
    let row = single_row(&text);
    let rel: f64 = column(&row, "rel_err").parse().unwrap();
    assert!(rel < 0.02, "rel_err = {rel}");
}

#[test]
fn blowup_exit_codes() {
    assert_eq!(exit_code(&pressctl(&["blowup", "--beta", "2", "--w0", "0.05"])), 4);
    assert_eq!(exit_code(&pressctl(&["blowup", "--beta", "2", "--w0", "1.5"])), 2);
}

fn write_series(path: &Path, times_values: impl Iterator<Item = (f64, f64)>) {
    let mut text = String::from("t,v\n");
    for (t, v) in times_values {
        text.push_str(&format!("{t},{v}\n"));
    }
    std::fs::write(path, text).unwrap();
}

/// Ramp, plateau, power-law decay: the shape of a commanded press run.
fn pulse(k: usize) -> f64 {
    let t = k as f64;
    if t < 100.0 {
        t / 100.0
    } else if t < 400.0 {
        1.0
    } else {
        0.99f64.powf(t - 400.0)
    }
}

#[test]
fn calibrate_recovers_exact_shift() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = dir.path().join("cmd.csv");
    let meas = dir.path().join("meas.csv");
    write_series(&cmd, (0..1000).map(|k| (k as f64, pulse(k))));
    write_series(&meas, (0..1000).map(|k| (k as f64, if k < 40 { 0.0 } else { pulse(k - 40) })));
    let text = stdout(&pressctl(&[
        "calibrate",
        "--commanded",
        cmd.to_str().unwrap(),
        "--measured",
        meas.to_str().unwrap(),
        "--max-lag",
        "100",
    ]));
    let row = single_row(&text);
    assert_eq!(column(&row, "tau"), "40");
    assert_eq!(column(&row, "score"), "0");
}

#[test]
fn calibrate_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = dir.path().join("cmd.csv");
    let meas = dir.path().join("meas.csv");
    // Single-sample files: insufficient data.
    std::fs::write(&cmd, "t,v\n0,1\n").unwrap();
    std::fs::write(&meas, "t,v\n0,1\n").unwrap();
    let out = pressctl(&[
        "calibrate", "--commanded", cmd.to_str().unwrap(), "--measured", meas.to_str().unwrap(),
        "--max-lag", "10",
    ]);
    assert_eq!(exit_code(&out), 5);
    // Three-column file: schema mismatch.
    std::fs::write(&cmd, "t,v,extra\n0,1,2\n1,1,2\n").unwrap();
    let out = pressctl(&[
        "calibrate", "--commanded", cmd.to_str().unwrap(), "--measured", meas.to_str().unwrap(),
        "--max-lag", "10",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn config_file_supplies_flags_and_explicit_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# simulate settings\nbeta=2\nw0=0.9\nsteps-per-delay=100\nhorizon=10\n")
        .unwrap();
    let from_config_override = stdout(&pressctl(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--w0", "0.55",
    ]));
    let from_flags = stdout(&pressctl(&[
        "simulate", "--beta", "2", "--w0", "0.55", "--steps-per-delay", "100", "--horizon", "10",
    ]));
    assert_eq!(from_config_override, from_flags);
}

#[test]
fn output_file_and_tsv_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.tsv");
    let out = pressctl(&[
        "simulate", "--beta", "2", "--w0", "0.5", "--horizon", "2", "--format", "tsv",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "table goes to the file, not stdout");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("t\tu"));
}
