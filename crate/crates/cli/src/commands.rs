//! Subcommand implementations. Each resolves its flags against the config
//! file, runs the analysis, and returns the fully rendered table.

use std::path::{Path, PathBuf};

use pressctl_core::blowup as blowup_mod;
use pressctl_core::calibration::{estimate_delay, VelocitySeries};
use pressctl_core::controller::{
    detect_stall, press_time, simulate_press_p1, simulate_press_p2, DerivedControl, PressParams,
};
use pressctl_core::dde::{self, BetaControlParams};
use pressctl_core::golden;
use pressctl_core::threshold as threshold_mod;

use crate::config::Config;
use crate::grid;
use crate::output::{num, opt_num, Format, Table};
use crate::{
    BlowupArgs, CalibrateArgs, CliError, FitArgs, PressArgs, SimulateArgs, ThresholdArgs,
};

pub fn simulate(args: &SimulateArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let beta = cfg.require(args.beta, "beta")?;
    let w0 = cfg.require(args.w0, "w0")?;
    let steps = cfg.resolve_or(args.steps_per_delay, "steps-per-delay", 100)?;
    let horizon = cfg.require(args.horizon, "horizon")?;
    let params = BetaControlParams::new(beta, w0, steps)?;
    let traj = dde::integrate_nondim(&params, horizon)?;
    let mut table = Table::new(format, &["t", "u"]);
    for (k, &u) in traj.values.iter().enumerate() {
        table.row(&[num(traj.time(k)), num(u)]);
    }
    Ok(table.finish())
}

pub fn threshold(args: &ThresholdArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let tol = positive(cfg.resolve_or(args.tol, "tol", 1e-4)?, "tol")?;
    let horizon =
        cfg.resolve_or(args.horizon, "horizon", threshold_mod::DEFAULT_BISECTION_HORIZON)?;
    let steps = cfg.resolve_or(args.steps_per_delay, "steps-per-delay", 200)?;
    let betas = betas_from(args.beta, args.beta_grid.as_deref(), cfg)?;
    let mut table = Table::new(format, &["beta", "g", "lo", "hi", "iterations"]);
    for beta in betas {
        let est = threshold_mod::bisect_threshold(beta, tol, horizon, steps)?;
        table.row(&[
            num(est.beta),
            num(est.g),
            num(est.bracket_lo),
            num(est.bracket_hi),
            est.iterations.to_string(),
        ]);
    }
    Ok(table.finish())
}

pub fn fit(args: &FitArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let beta_min = cfg.resolve_or(args.beta_min, "beta-min", 4.0)?;
    let beta_max = cfg.resolve_or(args.beta_max, "beta-max", f64::INFINITY)?;
    let input: Option<PathBuf> = cfg.resolve(args.input.clone(), "input")?;
    let grid_spec: Option<String> = cfg.resolve(args.beta_grid.clone(), "beta-grid")?;
    let mut points = match (input, grid_spec) {
        (Some(_), Some(_)) => {
            return Err(CliError::new(2, "give either --input or --beta-grid, not both"));
        }
        (Some(path), None) => read_two_columns(&path)?,
        (None, Some(spec)) => {
            let tol = positive(cfg.resolve_or(args.tol, "tol", 1e-4)?, "tol")?;
            let horizon = cfg.resolve_or(
                args.horizon,
                "horizon",
                threshold_mod::DEFAULT_BISECTION_HORIZON,
            )?;
            let steps = cfg.resolve_or(args.steps_per_delay, "steps-per-delay", 200)?;
            let betas = grid::parse_beta_grid(&spec)?;
            let mut pts = Vec::with_capacity(betas.len());
            for est in threshold_mod::sweep_thresholds(&betas, tol, horizon, steps) {
                let est = est?;
                pts.push((est.beta, est.g));
            }
            pts
        }
        (None, None) => {
            return Err(CliError::new(2, "one of --input or --beta-grid is required"));
        }
    };
    points.retain(|&(beta, _)| beta >= beta_min && beta <= beta_max);
    if points.len() < 2 {
        return Err(CliError::new(
            2,
            format!("power-law fit needs at least 2 points after filtering, got {}", points.len()),
        ));
    }
    let fit = threshold_mod::fit_power_law(&points)?;
    let mut table = Table::new(format, &["a", "p", "rms_residual", "beta_min", "beta_max"]);
    table.row(&[
        num(fit.a),
        num(fit.p),
        num(fit.rms_residual),
        num(fit.beta_range.0),
        num(fit.beta_range.1),
    ]);
    Ok(table.finish())
}

pub fn press(args: &PressArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let ell = cfg.require(args.ell, "ell")?;
    let tau = cfg.resolve_or(args.tau, "tau", 40.0)?;
    let vmax = cfg.resolve_or(args.vmax, "vmax", 10.0)?;
    let dt = cfg.resolve_or(args.dt, "dt", 0.5)?;
    let problem = cfg.resolve_or(args.problem.clone(), "problem", "both".to_string())?;
    let (run_p1, run_p2) = match problem.as_str() {
        "1" => (true, false),
        "2" => (false, true),
        "both" => (true, true),
        other => {
            return Err(CliError::new(2, format!("problem must be 1, 2, or both, got {other:?}")));
        }
    };
    if !(dt > 0.0 && tau > 0.0 && dt < tau) {
        return Err(CliError::new(2, format!("need 0 < dt < tau, got dt={dt}, tau={tau}")));
    }
    let betas = if run_p2 {
        let spec: String = cfg.require(args.beta_list.clone(), "beta-list")?;
        grid::parse_beta_list(&spec)?
    } else {
        Vec::new()
    };
    let steps_per_delay = (tau / dt) as usize;

    // The Problem-1 baseline is always simulated: the ratio columns are
    // recomputed against its times rather than stored.
    let g1 = threshold_for(1.0, steps_per_delay)?;
    let params1 = PressParams::new(ell, tau, vmax, 1.0, dt, g1)?;
    let traj1 = simulate_press_p1(&params1, params1.default_horizon())?;
    let base_t1 = press_time(&traj1, 1.0, ell);
    let base_t01 = press_time(&traj1, 0.1, ell);
    let ratio = |t: Option<f64>, base: Option<f64>| match (t, base) {
        (Some(t), Some(base)) if base > 0.0 => Some(t / base),
        _ => None,
    };

    let mut table = Table::new(
        format,
        &[
            "ell",
            "problem",
            "beta",
            "v0",
            "ell1",
            "t_within_1",
            "t_within_01",
            "stall_gap",
            "ratio_1",
            "ratio_01",
        ],
    );
    if run_p1 {
        let derived = DerivedControl::from_params(&params1);
        table.row(&[
            num(ell),
            "1".to_string(),
            num(1.0),
            num(derived.v0),
            num(derived.ell1),
            opt_num(base_t1),
            opt_num(base_t01),
            opt_num(detect_stall(&traj1, ell, 2.0 * tau)),
            opt_num(ratio(base_t1, base_t1)),
            opt_num(ratio(base_t01, base_t01)),
        ]);
    }
    for &beta in &betas {
        let g = threshold_for(beta, steps_per_delay)?;
        let params = PressParams::new(ell, tau, vmax, beta, dt, g)?;
        let traj = simulate_press_p2(&params, params.default_horizon())?;
        let t1 = press_time(&traj, 1.0, ell);
        let t01 = press_time(&traj, 0.1, ell);
        let derived = DerivedControl::from_params(&params);
        table.row(&[
            num(ell),
            "2".to_string(),
            num(beta),
            num(derived.v0),
            num(derived.ell1),
            opt_num(t1),
            opt_num(t01),
            opt_num(detect_stall(&traj, ell, 2.0 * tau)),
            opt_num(ratio(t1, base_t1)),
            opt_num(ratio(t01, base_t01)),
        ]);
    }
    Ok(table.finish())
}

pub fn blowup(args: &BlowupArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let beta = cfg.require(args.beta, "beta")?;
    let w0 = cfg.require(args.w0, "w0")?;
    let steps = cfg.resolve_or(args.steps_per_delay, "steps-per-delay", 4000)?;
    let horizon = cfg.resolve_or(args.horizon, "horizon", 50.0)?;
    let params = BetaControlParams::new(beta, w0, steps)?;
    params.validate_control_regime()?;
    let traj = dde::integrate_nondim_until(&params, horizon, 1.5)?;
    if dde::crossing_time(&traj).is_none() {
        return Err(CliError::new(
            4,
            format!("no blow-up within {horizon} delay units (beta={beta}, w0={w0} converges)"),
        ));
    }
    let report = blowup_mod::estimate_blowup(&traj, &params)?;
    let rel_err = (report.c_est - report.c_theory).abs() / report.c_theory;
    let mut table = Table::new(format, &["t_star", "c_est", "c_theory", "rel_err", "fit_rms"]);
    table.row(&[
        num(report.t_star),
        num(report.c_est),
        num(report.c_theory),
        num(rel_err),
        num(report.fit_rms),
    ]);
    Ok(table.finish())
}

pub fn calibrate(args: &CalibrateArgs, cfg: &Config, format: Format) -> Result<String, CliError> {
    let commanded: PathBuf = cfg.require(args.commanded.clone(), "commanded")?;
    let measured: PathBuf = cfg.require(args.measured.clone(), "measured")?;
    let max_lag = cfg.require(args.max_lag, "max-lag")?;
    let valid_from = cfg.resolve(args.valid_from, "valid-from")?;
    let cmd = read_series(&commanded, valid_from)?;
    let meas = read_series(&measured, valid_from)?;
    let est = estimate_delay(&cmd, &meas, max_lag)?;
    let mut table = Table::new(format, &["tau", "score"]);
    table.row(&[num(est.tau), num(est.score)]);
    Ok(table.finish())
}

fn positive(x: f64, name: &str) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::new(2, format!("{name} must be positive and finite, got {x}")))
    }
}

fn betas_from(
    beta: Option<f64>,
    grid_spec: Option<&str>,
    cfg: &Config,
) -> Result<Vec<f64>, CliError> {
    let beta = cfg.resolve(beta, "beta")?;
    let grid_spec: Option<String> =
        cfg.resolve(grid_spec.map(str::to_string), "beta-grid")?;
    match (beta, grid_spec) {
        (Some(_), Some(_)) => Err(CliError::new(2, "give either --beta or --beta-grid, not both")),
        (Some(beta), None) => Ok(vec![beta]),
        (None, Some(spec)) => grid::parse_beta_grid(&spec),
        (None, None) => Err(CliError::new(2, "one of --beta or --beta-grid is required")),
    }
}

/// Two numeric columns, comma or tab separated; a single non-numeric first
/// line is treated as a header.
fn read_two_columns(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split([',', '\t']).map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::new(
                2,
                format!("{}:{}: expected two columns, got {}", path.display(), lineno + 1, fields.len()),
            ));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ if lineno == 0 => continue,
            _ => {
                return Err(CliError::new(
                    2,
                    format!("{}:{}: non-numeric row {raw:?}", path.display(), lineno + 1),
                ));
            }
        }
    }
    Ok(rows)
}

fn read_series(path: &Path, valid_from: Option<f64>) -> Result<VelocitySeries, CliError> {
    let rows = read_two_columns(path)?;
    if rows.len() < 2 {
        return Err(CliError::new(
            5,
            format!("{}: need at least 2 samples, got {}", path.display(), rows.len()),
        ));
    }
    let t0 = rows[0].0;
    let dt = rows[1].0 - rows[0].0;
    if !(dt > 0.0) {
        return Err(CliError::new(
            2,
            format!("{}: time column must be strictly increasing", path.display()),
        ));
    }
    for (i, pair) in rows.windows(2).enumerate() {
        if ((pair[1].0 - pair[0].0) - dt).abs() > 1e-9 * dt.max(1.0) {
            return Err(CliError::new(
                2,
                format!("{}: non-uniform sampling at row {}", path.display(), i + 2),
            ));
        }
    }
    let values = rows.iter().map(|&(_, v)| v).collect();
    Ok(VelocitySeries::new(t0, dt, values, valid_from.unwrap_or(t0))?)
}

/// Threshold used as the gain G: pinned value when the run matches a
/// tabulated resolution, otherwise a fresh bisection at the run's own
/// grid (a threshold from a finer grid is supercritical for a coarser
/// discrete system and flips near-threshold runs).
fn threshold_for(beta: f64, steps_per_delay: usize) -> Result<f64, CliError> {
    if steps_per_delay == golden::PRESS_STEPS_PER_DELAY {
        if let Some(g) = golden::g_beta_press(beta) {
            return Ok(g);
        }
    }
    if steps_per_delay == golden::GOLDEN_STEPS_PER_DELAY {
        if let Some(g) = golden::g_beta(beta) {
            return Ok(g);
        }
    }
    let est = threshold_mod::bisect_threshold(
        beta,
        golden::GOLDEN_TOL,
        golden::GOLDEN_HORIZON,
        steps_per_delay,
    )?;
    Ok(est.g)
}
