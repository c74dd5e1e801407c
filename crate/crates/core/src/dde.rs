//! Nondimensional delayed press model.
//!
//! The model is `du/dt = w0 |1 - u(t-1)|^beta` for `t > 1` with the linear
//! ramp `u(t) = w0 t` on `[0, 1]`. Integration uses explicit Euler on a
//! uniform grid with exactly `steps_per_delay` steps per delay interval, so
//! the delayed sample is an integer index shift and no interpolation is
//! needed.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Parameters of the nondimensional model plus grid resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaControlParams {
    /// Control exponent. Control analyses require `beta >= 1`.
    pub beta: f64,
    /// Initial slope (nondimensional initial velocity).
    pub w0: f64,
    /// Grid steps per delay interval; `dt = 1 / steps_per_delay`.
    pub steps_per_delay: usize,
}

impl BetaControlParams {
    pub fn new(beta: f64, w0: f64, steps_per_delay: usize) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Parameter(format!("beta must be positive, got {beta}")));
        }
        if !w0.is_finite() {
            return Err(Error::Parameter("w0 must be finite".to_string()));
        }
        if steps_per_delay < 1 {
            return Err(Error::Parameter("steps_per_delay must be >= 1".to_string()));
        }
        Ok(Self { beta, w0, steps_per_delay })
    }

    /// Grid spacing in delay units.
    pub fn dt(&self) -> f64 {
        1.0 / self.steps_per_delay as f64
    }

    /// Checks the restrictions shared by all threshold and control
    /// analyses: `beta >= 1` and `0 < w0 < 1`.
    pub fn validate_control_regime(&self) -> Result<()> {
        if self.beta < 1.0 {
            return Err(Error::Parameter(format!(
                "control analyses require beta >= 1, got {}",
                self.beta
            )));
        }
        if !(self.w0 > 0.0 && self.w0 < 1.0) {
            return Err(Error::Parameter(format!(
                "control analyses require 0 < w0 < 1, got {}",
                self.w0
            )));
        }
        Ok(())
    }
}

/// A solution sampled on a uniform grid. Sample `k` is the state at time
/// `start_time + k * dt`; `delay_steps` grid steps span one delay interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub delay_steps: usize,
    pub values: Vec<f64>,
    pub start_time: f64,
}

impl Trajectory {
    /// Time of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.start_time + k as f64 * self.dt
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Linear interpolation at time `t`; clamps to the endpoints outside
    /// the sampled range.
    pub fn interpolate(&self, t: f64) -> f64 {
        let s = (t - self.start_time) / self.dt;
        if s <= 0.0 {
            return self.values[0];
        }
        let k = s as usize;
        if k + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let frac = s - k as f64;
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }
}

/// Outcome of classifying a trajectory against the target level 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OvershootReport {
    /// The trajectory reached 1 and exceeded it; `t_cross` is the
    /// interpolated first-crossing time.
    Overshoot { t_cross: f64 },
    /// The trajectory stayed strictly below 1 over the horizon.
    Converging { final_value: f64, horizon: f64 },
    /// Degenerate input (non-increasing trajectory from w0 <= 0).
    Undetermined { horizon: f64 },
}

/// Integrates the nondimensional model up to `horizon` delay units.
///
/// The ramp fills samples `0..=N`; each later step adds
/// `dt * w0 * |1 - u_{n-N}|^beta`. Bit-identical output for identical
/// inputs.
pub fn integrate_nondim(params: &BetaControlParams, horizon: f64) -> Result<Trajectory> {
    integrate_nondim_until(params, horizon, f64::INFINITY)
}

/// Same scheme as [`integrate_nondim`] but stops early once a sample
/// strictly exceeds `stop_above`. Used by the bisection predicate, where
/// full-horizon output is wasted work in the overshoot branch.
pub fn integrate_nondim_until(
    params: &BetaControlParams,
    horizon: f64,
    stop_above: f64,
) -> Result<Trajectory> {
    if !(horizon >= 1.0) {
        return Err(Error::Parameter(format!("horizon must be >= 1, got {horizon}")));
    }
    if params.steps_per_delay < 1 {
        return Err(Error::Parameter("steps_per_delay must be >= 1".to_string()));
    }
    let n_delay = params.steps_per_delay;
    let dt = params.dt();
    let total_steps = libm::ceil(horizon * n_delay as f64) as usize;
    let mut values = Vec::with_capacity(total_steps + 1);
    for n in 0..=n_delay.min(total_steps) {
        values.push(params.w0 * n as f64 * dt);
    }
    let mut stopped = false;
    for n in n_delay..total_steps {
        let delayed = values[n - n_delay];
        let u_next = values[n] + dt * params.w0 * libm::pow(libm::fabs(1.0 - delayed), params.beta);
        if !u_next.is_finite() {
            return Err(Error::Numeric {
                step: n + 1,
                detail: format!("u became non-finite (beta={}, w0={})", params.beta, params.w0),
            });
        }
        values.push(u_next);
        if u_next > stop_above {
            stopped = true;
            break;
        }
    }
    let _ = stopped;
    Ok(Trajectory {
        dt,
        delay_steps: n_delay,
        values,
        start_time: 0.0,
    })
}

/// Exact solution on the first two delay intervals.
///
/// On `[0, 1]` the ramp gives `w0 t`; on `[1, 2]` the delayed argument is
/// still on the ramp, so one quadrature yields
/// `w0 + (1 - (1 - w0 (t-1))^(beta+1)) / (beta + 1)`.
pub fn exact_segment_u(params: &BetaControlParams, t: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 2], got {t}")));
    }
    params.validate_control_regime()?;
    if t <= 1.0 {
        Ok(params.w0 * t)
    } else {
        let inner = 1.0 - params.w0 * (t - 1.0);
        Ok(params.w0
            + (1.0 - libm::pow(inner, params.beta + 1.0)) / (params.beta + 1.0))
    }
}

/// Classifies a trajectory as overshooting, converging, or degenerate.
///
/// Overshoot requires a sample strictly above 1; the crossing time is the
/// interpolated root of `u = 1` (an exact hit counts as the root). A final
/// sample exactly at 1 also classifies as overshoot so the bisection
/// predicate stays deterministic. A trajectory that decreases by more than
/// `plateau_tol` anywhere is degenerate (w0 <= 0) and reports
/// `Undetermined`.
pub fn classify(traj: &Trajectory, horizon: f64, plateau_tol: f64) -> Result<OvershootReport> {
    if traj.values.is_empty() {
        return Err(Error::Parameter("empty trajectory".to_string()));
    }
    if !(plateau_tol > 0.0) {
        return Err(Error::Parameter("plateau_tol must be positive".to_string()));
    }
    if let Some(t_cross) = crossing_time(traj) {
        return Ok(OvershootReport::Overshoot { t_cross });
    }
    let last = *traj.values.last().unwrap();
    if last == 1.0 {
        // Ties at the final sample count as overshoot (exact hit of the
        // target level); the crossing time is the hit itself.
        let k = traj.values.iter().position(|&u| u >= 1.0).unwrap();
        return Ok(OvershootReport::Overshoot { t_cross: traj.time(k) });
    }
    let decreasing = traj
        .values
        .windows(2)
        .any(|w| w[1] < w[0] - plateau_tol);
    if decreasing {
        return Ok(OvershootReport::Undetermined { horizon });
    }
    Ok(OvershootReport::Converging { final_value: last, horizon })
}

/// First time the trajectory reaches 1, by linear interpolation between the
/// bracketing samples. `None` unless some sample strictly exceeds 1. An
/// exact sample at 1 followed by a strict exceedance counts as the root.
pub fn crossing_time(traj: &Trajectory) -> Option<f64> {
    if !traj.values.iter().any(|&u| u > 1.0) {
        return None;
    }
    let k = traj.values.iter().position(|&u| u >= 1.0).unwrap();
    let u_k = traj.values[k];
    if u_k == 1.0 || k == 0 {
        return Some(traj.time(k));
    }
    let u_prev = traj.values[k - 1];
    let frac = (1.0 - u_prev) / (u_k - u_prev);
    Some(traj.time(k - 1) + frac * traj.dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64, w0: f64, n: usize) -> BetaControlParams {
        BetaControlParams::new(beta, w0, n).unwrap()
    }

    #[test]
    fn zero_velocity_stays_at_zero() {
        let traj = integrate_nondim(&params(2.0, 0.0, 10), 5.0).unwrap();
        assert!(traj.values.iter().all(|&u| u == 0.0));
        assert_eq!(traj.values.len(), 51);
    }

    #[test]
    fn hand_unrolled_recurrence_n1() {
        // u2 = 0.5 + 0.5*|1-0|^2 = 1.0, u3 = 1.0 + 0.5*|1-0.5|^2 = 1.125
        let traj = integrate_nondim(&params(2.0, 0.5, 1), 3.0).unwrap();
        assert_eq!(traj.values, alloc::vec![0.0, 0.5, 1.0, 1.125]);
    }

    #[test]
    fn fig4_trajectories_ordered_by_w0() {
        let w0s = [0.55, 0.66, 0.77];
        let trajs: Vec<Trajectory> = w0s
            .iter()
            .map(|&w0| integrate_nondim(&params(2.0, w0, 100), 10.0).unwrap())
            .collect();
        for traj in &trajs {
            assert!(traj.values.windows(2).all(|w| w[1] >= w[0]));
        }
        for pair in trajs.windows(2) {
            for k in 1..pair[0].values.len() {
                assert!(pair[0].values[k] < pair[1].values[k], "ordering failed at {k}");
            }
        }
    }

    #[test]
    fn exact_segment_ramp_end() {
        let p = params(3.0, 0.3, 10);
        assert_eq!(exact_segment_u(&p, 1.0).unwrap(), 0.3);
    }

    #[test]
    fn exact_segment_closed_form_values() {
        let p = params(1.0, 0.5, 10);
        // t=2: 0.5 + (1/2)(1 - 0.25) = 0.875
        assert!((exact_segment_u(&p, 2.0).unwrap() - 0.875).abs() < 1e-15);
        // t=1.5: 0.5 + (1/2)(1 - 0.5625) = 0.71875
        assert!((exact_segment_u(&p, 1.5).unwrap() - 0.71875).abs() < 1e-15);
    }

    #[test]
    fn exact_segment_euler_cross_check() {
        let p = params(1.0, 0.5, 10_000);
        let traj = integrate_nondim(&p, 2.0).unwrap();
        let euler = traj.interpolate(1.5);
        assert!((euler - 0.71875).abs() < 1e-3);
    }

    #[test]
    fn exact_segment_domain_error() {
        let p = params(1.0, 0.5, 10);
        assert!(matches!(exact_segment_u(&p, 2.5), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_zero_run_converges() {
        let traj = integrate_nondim(&params(2.0, 0.0, 10), 5.0).unwrap();
        match classify(&traj, 5.0, 1e-12).unwrap() {
            OvershootReport::Converging { final_value, .. } => assert_eq!(final_value, 0.0),
            other => panic!("expected Converging, got {other:?}"),
        }
    }

    #[test]
    fn classify_exact_hit_counts_as_crossing() {
        let traj = integrate_nondim(&params(2.0, 0.5, 1), 3.0).unwrap();
        match classify(&traj, 3.0, 1e-12).unwrap() {
            OvershootReport::Overshoot { t_cross } => assert_eq!(t_cross, 2.0),
            other => panic!("expected Overshoot, got {other:?}"),
        }
    }

    #[test]
    fn classify_large_w0_overshoots_within_horizon() {
        let traj = integrate_nondim(&params(2.0, 0.77, 1000), 10.0).unwrap();
        match classify(&traj, 10.0, 1e-12).unwrap() {
            OvershootReport::Overshoot { t_cross } => {
                assert!(t_cross > 1.0 && t_cross < 10.0)
            }
            other => panic!("expected Overshoot, got {other:?}"),
        }
    }

    #[test]
    fn classify_negative_w0_is_undetermined() {
        let traj = integrate_nondim(&params(2.0, -0.5, 10), 5.0).unwrap();
        assert!(matches!(
            classify(&traj, 5.0, 1e-12).unwrap(),
            OvershootReport::Undetermined { .. }
        ));
    }

    #[test]
    fn classify_empty_is_error() {
        let traj = Trajectory { dt: 0.1, delay_steps: 10, values: Vec::new(), start_time: 0.0 };
        assert!(matches!(classify(&traj, 5.0, 1e-12), Err(Error::Parameter(_))));
    }

    #[test]
    fn crossing_time_below_one_is_none() {
        let traj = Trajectory {
            dt: 1.0,
            delay_steps: 1,
            values: alloc::vec![0.0, 0.4, 0.8],
            start_time: 0.0,
        };
        assert_eq!(crossing_time(&traj), None);
    }

    #[test]
    fn crossing_time_exact_sample_hit() {
        let traj = Trajectory {
            dt: 1.0,
            delay_steps: 1,
            values: alloc::vec![0.0, 0.5, 1.0, 1.125],
            start_time: 0.0,
        };
        assert_eq!(crossing_time(&traj), Some(2.0));
    }

    #[test]
    fn crossing_time_interpolates() {
        let traj = Trajectory {
            dt: 1.0,
            delay_steps: 1,
            values: alloc::vec![0.0, 0.6, 0.9, 1.1],
            start_time: 0.0,
        };
        let t = crossing_time(&traj).unwrap();
        assert!((t - 2.5).abs() < 1e-12);
    }

    #[test]
    fn determinism_bitwise() {
        let p = params(3.0, 0.42, 200);
        let a = integrate_nondim(&p, 20.0).unwrap();
        let b = integrate_nondim(&p, 20.0).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn horizon_below_one_rejected() {
        assert!(matches!(
            integrate_nondim(&params(2.0, 0.5, 10), 0.5),
            Err(Error::Parameter(_))
        ));
    }
}
