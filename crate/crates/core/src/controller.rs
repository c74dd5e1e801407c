//! Dimensional press simulation under the velocity-clamped control law.
//!
//! Two discrete controllers are compared: the linear law
//! `v = v0 |(ell - X)/ell|` (problem 1) and the clamped power law
//! `v = v0 |min(ell1, ell - X)/min(ell1, ell)|^beta` (problem 2), where `X`
//! is the position reading one delay interval old. Press times are read off
//! the delayed sample, matching the reporting convention of the source
//! tables.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dde::Trajectory;
use crate::error::{Error, Result};

/// Dimensional controller parameters plus the threshold value used as G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressParams {
    /// Target stroke (length units).
    pub ell: f64,
    /// Communication delay (time units).
    pub tau: f64,
    /// Maximum commanded velocity.
    pub vmax: f64,
    /// Control exponent.
    pub beta: f64,
    /// Simulation step; must satisfy `dt < tau`.
    pub dt: f64,
    /// Overshoot threshold g(beta) used as the gain G.
    pub g_of_beta: f64,
}

impl PressParams {
    pub fn new(ell: f64, tau: f64, vmax: f64, beta: f64, dt: f64, g_of_beta: f64) -> Result<Self> {
        if !(ell > 0.0 && tau > 0.0 && vmax > 0.0 && dt > 0.0) {
            return Err(Error::Parameter(format!(
                "ell, tau, vmax, dt must be positive, got {ell}, {tau}, {vmax}, {dt}"
            )));
        }
        if beta < 1.0 {
            return Err(Error::Parameter(format!("beta must be >= 1, got {beta}")));
        }
        if !(g_of_beta > 0.0 && g_of_beta < 1.0) {
            return Err(Error::Parameter(format!("g must lie in (0, 1), got {g_of_beta}")));
        }
        if dt >= tau {
            return Err(Error::Parameter(format!("dt must be < tau, got dt={dt}, tau={tau}")));
        }
        Ok(Self { ell, tau, vmax, beta, dt, g_of_beta })
    }

    /// Delay expressed in grid steps, `floor(tau / dt)`.
    pub fn delay_steps(&self) -> usize {
        libm::floor(self.tau / self.dt) as usize
    }

    /// Default simulation horizon: ten times the structural lower bound on
    /// the total press-and-stop time.
    pub fn default_horizon(&self) -> f64 {
        10.0 * total_stop_time_bound(self)
    }
}

/// Quantities derived from [`PressParams`]: clamped initial velocity and
/// the mode-switch distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedControl {
    pub v0: f64,
    pub ell1: f64,
}

impl DerivedControl {
    pub fn from_params(params: &PressParams) -> Self {
        let v0 = (params.ell * params.g_of_beta / params.tau).min(params.vmax);
        let ell1 = params.tau * params.vmax / params.g_of_beta;
        Self { v0, ell1 }
    }
}

/// Commanded velocity for a delayed position reading `X`.
pub fn command_velocity(x_delayed: f64, params: &PressParams, derived: &DerivedControl) -> f64 {
    let num = derived.ell1.min(params.ell - x_delayed);
    let den = derived.ell1.min(params.ell);
    derived.v0 * libm::pow(libm::fabs(num / den), params.beta)
}

/// Linear controller without the mode-switch clamp (problem 1). The initial
/// velocity uses G = g(1): `v0 = min(ell * G / tau, vmax)`.
pub fn simulate_press_p1(params: &PressParams, horizon: f64) -> Result<Trajectory> {
    let v0 = (params.ell * params.g_of_beta / params.tau).min(params.vmax);
    simulate(params, horizon, |x_delayed| {
        v0 * libm::fabs((params.ell - x_delayed) / params.ell)
    })
}

/// Clamped power-law controller (problem 2).
pub fn simulate_press_p2(params: &PressParams, horizon: f64) -> Result<Trajectory> {
    let derived = DerivedControl::from_params(params);
    simulate(params, horizon, |x_delayed| {
        command_velocity(x_delayed, params, &derived)
    })
}

fn simulate(
    params: &PressParams,
    horizon: f64,
    velocity: impl Fn(f64) -> f64,
) -> Result<Trajectory> {
    if !(horizon > 0.0) {
        return Err(Error::Parameter(format!("horizon must be positive, got {horizon}")));
    }
    let n_delay = params.delay_steps();
    let total_steps = libm::ceil(horizon / params.dt) as usize;
    if total_steps < n_delay {
        return Err(Error::Parameter("horizon shorter than the delay".to_string()));
    }
    let v0 = velocity(0.0);
    let mut values = Vec::with_capacity(total_steps + 1);
    for n in 0..=n_delay {
        values.push(v0 * n as f64 * params.dt);
    }
    for n in n_delay..total_steps {
        let x_next = values[n] + params.dt * velocity(values[n - n_delay]);
        if !x_next.is_finite() {
            return Err(Error::Numeric {
                step: n + 1,
                detail: "press position became non-finite".to_string(),
            });
        }
        values.push(x_next);
    }
    Ok(Trajectory {
        dt: params.dt,
        delay_steps: n_delay,
        values,
        start_time: 0.0,
    })
}

/// Press times at both reporting tolerances plus the stall gap, if any.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PressTimes {
    pub t_within_1: Option<f64>,
    pub t_within_01: Option<f64>,
    pub stop_gap: Option<f64>,
}

/// Smallest grid time `t_n` at which the delayed reading satisfies
/// `ell - x_{n-N} < eps`. The criterion reads the delayed sample, matching
/// the table definition; it is first evaluable at index N.
pub fn press_time(traj: &Trajectory, eps: f64, ell: f64) -> Option<f64> {
    if !(eps > 0.0) {
        return None;
    }
    let n_delay = traj.delay_steps;
    for n in n_delay..traj.values.len() {
        if ell - traj.values[n - n_delay] < eps {
            return Some(traj.time(n));
        }
    }
    None
}

/// Displacement below which the press is considered motionless over the
/// trailing window.
pub const STALL_MOTION_TOL: f64 = 1e-6;

/// Gap below which a stall is not reported (the run simply converged).
pub const STALL_GAP_FLOOR: f64 = 1e-6;

/// Reports the remaining gap `ell - x_final` when the press has stopped
/// moving short of the target: total displacement over the trailing
/// `window` time units below [`STALL_MOTION_TOL`] with a gap above
/// [`STALL_GAP_FLOOR`].
pub fn detect_stall(traj: &Trajectory, ell: f64, window: f64) -> Option<f64> {
    if !(window > 0.0) || traj.values.is_empty() {
        return None;
    }
    let window_steps = libm::ceil(window / traj.dt) as usize;
    if traj.values.len() <= window_steps {
        return None;
    }
    let last = *traj.values.last().unwrap();
    let earlier = traj.values[traj.values.len() - 1 - window_steps];
    let gap = ell - last;
    if last - earlier < STALL_MOTION_TOL && gap > STALL_GAP_FLOOR {
        Some(gap)
    } else {
        None
    }
}

/// Lower bound on the total press-and-stop time:
/// `max(tau, ell / vmax) + tau`.
pub fn total_stop_time_bound(params: &PressParams) -> f64 {
    params.tau.max(params.ell / params.vmax) + params.tau
}
