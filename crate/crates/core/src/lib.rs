//! Simulation and analysis of robot-assisted sensor relocation.
//!
//! Sensors start at Poisson-process positions on the half-line (or on a
//! grid built from two independent processes) and must end on an anchor
//! layout that meets coverage and interference requirements. A single
//! robot of capacity `k` carries them there with a greedy schedule. This
//! crate simulates those schedules exactly, evaluates robot and
//! autonomous transportation costs together with their closed-form bounds,
//! and runs seeded Monte Carlo sweeps over the number of sensors.
//!
//! - [`stochastic`]: seeded deployments and Gamma moments
//! - [`targets`]: anchor layouts and coverage/interference validation
//! - [`line_transport`]: greedy rounds, offset schedules, line costs and bounds
//! - [`plane_transport`]: axis-aligned grid schedules, plane costs and bounds
//! - [`experiments`]: trials, group means, sweeps, power-law fits, figure presets

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod line_transport;
pub mod plane_transport;
pub mod stochastic;
pub mod targets;

pub use error::{Error, Result};
