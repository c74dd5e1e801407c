//! Core numerics for delay-aware press control.
//!
//! The press is modeled by a delay differential equation: the commanded
//! velocity depends on a position reading that is one delay interval old.
//! This crate integrates the nondimensional form of that equation, locates
//! the critical initial velocity separating overshoot from convergence,
//! simulates the dimensional velocity-clamped controller, analyzes the
//! equivalent finite-time blow-up system, and estimates the delay itself
//! from paired command/measurement series.
//!
//! The crate is `no_std` (alloc required); all operations are pure and
//! deterministic.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod calibration;
pub mod controller;
pub mod dde;
pub mod error;
pub mod golden;
pub mod threshold;

pub use dde::{BetaControlParams, OvershootReport, Trajectory};
pub use error::Error;
