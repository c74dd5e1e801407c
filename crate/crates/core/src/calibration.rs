//! Delay estimation from paired commanded/measured velocity series.
//!
//! The delay is read as the lag that best aligns the measured velocity with
//! the commanded one: an integer-sample least-squares match over the valid
//! overlap, which is the reproducible version of reading the horizontal gap
//! between the two curves off a plot.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A uniformly sampled velocity series. Samples before `valid_from` are
/// untrusted and excluded from matching.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocitySeries {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    pub valid_from: f64,
}

impl VelocitySeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>, valid_from: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
        }
        if valid_from < t0 {
            return Err(Error::Parameter(format!(
                "valid_from {valid_from} precedes series start {t0}"
            )));
        }
        Ok(Self { t0, dt, values, valid_from })
    }

    fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Index of the first trusted sample.
    fn first_valid_index(&self) -> usize {
        libm::ceil((self.valid_from - self.t0) / self.dt - 1e-9) as usize
    }
}

/// Grid-resolution delay estimate: `tau` is an integer multiple of `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    pub tau: f64,
    /// Mean squared difference at the optimum.
    pub score: f64,
    /// The (min, max) lag searched, in time units.
    pub lag_grid: (f64, f64),
}

/// Finds the integer-sample lag L minimizing the mean squared difference
/// between `measured(t)` and `commanded(t - L dt)` over the valid overlap.
pub fn estimate_delay(
    commanded: &VelocitySeries,
    measured: &VelocitySeries,
    max_lag: f64,
) -> Result<DelayEstimate> {
    if !(max_lag > 0.0) {
        return Err(Error::Parameter(format!("max_lag must be positive, got {max_lag}")));
    }
    if (commanded.dt - measured.dt).abs() > 1e-12 * commanded.dt {
        return Err(Error::Parameter(format!(
            "series must share dt, got {} and {}",
            commanded.dt, measured.dt
        )));
    }
    let dt = commanded.dt;
    let max_lag_steps = libm::floor(max_lag / dt + 1e-9) as usize;

    let is_constant = |s: &VelocitySeries| {
        let from = s.first_valid_index();
        s.values[from.min(s.values.len())..]
            .windows(2)
            .all(|w| w[0] == w[1])
    };
    if is_constant(commanded) || is_constant(measured) {
        return Err(Error::DegenerateInput(
            "constant series: lag is unidentifiable".to_string(),
        ));
    }

    // Overlap of the valid regions at zero lag, in absolute sample times.
    let overlap_score = |lag: usize| -> Option<(f64, usize)> {
        let mut sum = 0.0;
        let mut count = 0usize;
        let m_from = measured.first_valid_index();
        for i in m_from..measured.values.len() {
            let t = measured.time(i);
            let t_cmd = t - lag as f64 * dt;
            let j = libm::round((t_cmd - commanded.t0) / dt) as i64;
            if j < 0 || j as usize >= commanded.values.len() {
                continue;
            }
            let j = j as usize;
            if j < commanded.first_valid_index() {
                continue;
            }
            let d = measured.values[i] - commanded.values[j];
            sum += d * d;
            count += 1;
        }
        if count == 0 {
            None
        } else {
            Some((sum / count as f64, count))
        }
    };

    // The pre-shift overlap must be long enough to identify lags up to
    // max_lag.
    let required = libm::ceil(5.0 * max_lag / dt) as usize;
    match overlap_score(0) {
        Some((_, count)) if count >= required => {}
        _ => {
            return Err(Error::Data(format!(
                "valid overlap shorter than 5 * max_lag ({required} samples required)"
            )));
        }
    }

    let mut best_lag = 0usize;
    let mut best_score = f64::INFINITY;
    for lag in 0..=max_lag_steps {
        if let Some((score, _)) = overlap_score(lag) {
            if score < best_score {
                best_score = score;
                best_lag = lag;
            }
        }
    }
    Ok(DelayEstimate {
        tau: best_lag as f64 * dt,
        score: best_score,
        lag_grid: (0.0, max_lag_steps as f64 * dt),
    })
}
