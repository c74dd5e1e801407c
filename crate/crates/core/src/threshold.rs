//! Overshoot threshold location and the power-law summary of g(beta).
//!
//! For each exponent there is a critical initial velocity g(beta): above it
//! the trajectory overshoots the target level 1, at or below it the
//! trajectory converges from below. The threshold is found by bisection on
//! the overshoot predicate, swept over beta grids, and summarized by a
//! power law `g(beta) ~ 1 - a * beta^(-p)` fitted in log-log space.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dde::{self, BetaControlParams, OvershootReport};
use crate::error::{Error, Result};

/// Default classification horizon for bisection, in delay units.
/// Near-threshold trajectories converge slowly; see the resolution
/// stability check in the tests.
pub const DEFAULT_BISECTION_HORIZON: f64 = 500.0;

/// Initial bracket inset: bisection starts on [delta, 1 - delta].
pub const BRACKET_DELTA: f64 = 1e-3;

const PLATEAU_TOL: f64 = 1e-12;

/// Result of one bisection run for a fixed beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEstimate {
    pub beta: f64,
    /// Midpoint of the final bracket.
    pub g: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
    pub tol: f64,
    pub horizon: f64,
    pub steps_per_delay: usize,
}

/// Power-law summary `g(beta) ~ 1 - a * beta^(-p)` fitted by ordinary
/// least squares on `(log beta, log(1 - g))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub a: f64,
    pub p: f64,
    /// Root-mean-square residual in log space.
    pub rms_residual: f64,
    pub beta_range: (f64, f64),
}

/// True iff the trajectory for (beta, w0) overshoots the level 1 within the
/// horizon. A final sample exactly at 1 counts as overshoot.
pub fn overshoots(beta: f64, w0: f64, horizon: f64, steps_per_delay: usize) -> Result<bool> {
    let params = BetaControlParams::new(beta, w0, steps_per_delay)?;
    params.validate_control_regime()?;
    // Stop integrating as soon as the level is exceeded.
    let traj = dde::integrate_nondim_until(&params, horizon, 1.0)?;
    match dde::classify(&traj, horizon, PLATEAU_TOL)? {
        OvershootReport::Overshoot { .. } => Ok(true),
        OvershootReport::Converging { .. } => Ok(false),
        OvershootReport::Undetermined { .. } => Err(Error::Parameter(format!(
            "degenerate trajectory for beta={beta}, w0={w0}"
        ))),
    }
}

/// Bisects the overshoot predicate over w0 to locate g(beta).
///
/// Starts from the bracket `[BRACKET_DELTA, 1 - BRACKET_DELTA]`, which must
/// straddle the threshold (lo converging, hi overshooting). Valid under the
/// monotonicity of the predicate in w0.
pub fn bisect_threshold(
    beta: f64,
    tol: f64,
    horizon: f64,
    steps_per_delay: usize,
) -> Result<ThresholdEstimate> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Parameter(format!("tol must lie in (0, 1), got {tol}")));
    }
    let mut lo = BRACKET_DELTA;
    let mut hi = 1.0 - BRACKET_DELTA;
    let lo_overshoots = overshoots(beta, lo, horizon, steps_per_delay)?;
    let hi_overshoots = overshoots(beta, hi, horizon, steps_per_delay)?;
    if lo_overshoots || !hi_overshoots {
        return Err(Error::Bracketing { beta, lo, hi, lo_overshoots, hi_overshoots });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if overshoots(beta, mid, horizon, steps_per_delay)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    // Re-verify the final bracket at the recorded horizon and resolution.
    debug_assert!(!overshoots(beta, lo, horizon, steps_per_delay)?);
    debug_assert!(overshoots(beta, hi, horizon, steps_per_delay)?);
    Ok(ThresholdEstimate {
        beta,
        g: 0.5 * (lo + hi),
        bracket_lo: lo,
        bracket_hi: hi,
        iterations,
        tol,
        horizon,
        steps_per_delay,
    })
}

/// One estimate per beta, order preserved; per-entry failures are returned
/// in place rather than aborting the sweep.
pub fn sweep_thresholds(
    betas: &[f64],
    tol: f64,
    horizon: f64,
    steps_per_delay: usize,
) -> Vec<Result<ThresholdEstimate>> {
    betas
        .iter()
        .map(|&beta| bisect_threshold(beta, tol, horizon, steps_per_delay))
        .collect()
}

/// Fits `1 - g = a * beta^(-p)` by least squares on the log-log points.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::Parameter("power-law fit needs at least 2 points".to_string()));
    }
    let mut beta_min = f64::INFINITY;
    let mut beta_max = f64::NEG_INFINITY;
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(beta, g) in points {
        if !(beta > 0.0) {
            return Err(Error::Parameter(format!("beta must be positive, got {beta}")));
        }
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::Parameter(format!("g must lie in (0, 1), got {g}")));
        }
        beta_min = beta_min.min(beta);
        beta_max = beta_max.max(beta);
        xs.push(libm::log(beta));
        ys.push(libm::log(1.0 - g));
    }
    let n = points.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(Error::Parameter("betas must be distinct".to_string()));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let mut ss_res = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    Ok(PowerLawFit {
        a: libm::exp(intercept),
        p: -slope,
        rms_residual: libm::sqrt(ss_res / n),
        beta_range: (beta_min, beta_max),
    })
}

/// Optimal dimensional initial velocity `ell * g / tau`.
pub fn optimal_initial_velocity(ell: f64, tau: f64, _beta: f64, g: f64) -> Result<f64> {
    if !(ell > 0.0) || !(tau > 0.0) {
        return Err(Error::Parameter(format!(
            "ell and tau must be positive, got ell={ell}, tau={tau}"
        )));
    }
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::Parameter(format!("g must lie in (0, 1), got {g}")));
    }
    Ok(ell * g / tau)
}

/// Reference value of the published approximation `1 - 0.79 * beta^(-0.94)`.
pub fn power_law_reference(beta: f64) -> f64 {
    1.0 - 0.79 * libm::pow(beta, -0.94)
}
