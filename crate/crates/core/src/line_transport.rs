//! Greedy robot transport on the half-line.
//!
//! A round of the greedy procedure starts at `y0`, sweeps right collecting
//! `l` sensors, then drops them at their targets from the rightmost down
//! (moving right first if the last target lies beyond the last pickup), and
//! finally walks back to the last pickup position. A full schedule with
//! offset `j` runs a prologue round on the first `j` sensors, then rounds
//! of `k` sensors, then one round on whatever is left.
//!
//! Costs raise the *total* distance to the power `a`. Bounds are evaluated
//! as closed-form formulas so they can be checked against simulations.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};
use crate::stochastic::Deployment1D;
use crate::targets::TargetPlan1D;

/// Robot carrying capacity, checked against the sensor count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotSpec {
    capacity: usize,
}

impl RobotSpec {
    pub fn new(capacity: usize, n: usize) -> Result<Self> {
        if capacity < 1 || capacity > n {
            return Err(invalid(format!("capacity {capacity} outside 1..={n}")));
        }
        Ok(Self { capacity })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// The robot always starts at the origin.
    pub fn start(&self) -> f64 {
        0.0
    }

    pub fn check_offset(&self, j: usize) -> Result<()> {
        if j >= self.capacity {
            return Err(invalid(format!("offset {j} outside 0..{}", self.capacity)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub from: f64,
    pub to: f64,
    /// Sensors on board while travelling this leg.
    pub carried: usize,
}

impl Leg {
    pub fn length(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

/// A pickup or a drop of one sensor (0-based index into the deployment).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stop {
    pub sensor: usize,
    pub at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    legs: Vec<Leg>,
    pickups: Vec<Stop>,
    drops: Vec<Stop>,
    total_distance: f64,
    end_position: f64,
}

impl Trajectory {
    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn pickups(&self) -> &[Stop] {
        &self.pickups
    }

    pub fn drops(&self) -> &[Stop] {
        &self.drops
    }

    /// Sum of leg lengths in travel order.
    pub fn total_distance(&self) -> f64 {
        self.total_distance
    }

    pub fn end_position(&self) -> f64 {
        self.end_position
    }

    /// Final position of every sensor, indexed like the deployment.
    pub fn deposited_positions(&self, n: usize) -> Vec<f64> {
        let mut out = vec![f64::NAN; n];
        for stop in &self.drops {
            out[stop.sensor] = stop.at;
        }
        out
    }

    /// One JSON object on a single line: legs, pickups, drops and totals.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trajectory serializes")
    }
}

/// Receives robot events in travel order.
pub(crate) trait RobotSink {
    fn leg(&mut self, from: f64, to: f64, carried: usize);
    fn pickup(&mut self, _sensor: usize, _at: f64) {}
    fn drop_off(&mut self, _sensor: usize, _at: f64) {}
}

/// Accumulates distance only.
#[derive(Default)]
pub(crate) struct Odometer {
    pub(crate) distance: f64,
}

impl RobotSink for Odometer {
    fn leg(&mut self, from: f64, to: f64, _carried: usize) {
        self.distance += (to - from).abs();
    }
}

#[derive(Default)]
struct Recorder {
    legs: Vec<Leg>,
    pickups: Vec<Stop>,
    drops: Vec<Stop>,
    distance: f64,
}

impl RobotSink for Recorder {
    fn leg(&mut self, from: f64, to: f64, carried: usize) {
        self.distance += (to - from).abs();
        self.legs.push(Leg { from, to, carried });
    }

    fn pickup(&mut self, sensor: usize, at: f64) {
        self.pickups.push(Stop { sensor, at });
    }

    fn drop_off(&mut self, sensor: usize, at: f64) {
        self.drops.push(Stop { sensor, at });
    }
}

impl Recorder {
    fn finish(self, end_position: f64) -> Trajectory {
        Trajectory {
            legs: self.legs,
            pickups: self.pickups,
            drops: self.drops,
            total_distance: self.distance,
            end_position,
        }
    }
}

fn step<S: RobotSink>(sink: &mut S, at: &mut f64, to: f64, carried: usize) {
    if *at != to {
        sink.leg(*at, to, carried);
        *at = to;
    }
}

/// One greedy round. `first` is the deployment index of `sensors[0]`.
/// Returns the end position, which is the last pickup.
pub(crate) fn greedy_round<S: RobotSink>(
    sink: &mut S,
    y0: f64,
    sensors: &[f64],
    deposits: &[f64],
    first: usize,
) -> f64 {
    let mut at = y0;
    for (i, &y) in sensors.iter().enumerate() {
        step(sink, &mut at, y, i);
        sink.pickup(first + i, y);
    }
    let last_pickup = at;
    let l = sensors.len();
    // rightmost target first; if it lies left of the robot this is simply
    // the start of the leftward sweep
    for (i, &p) in deposits.iter().enumerate().rev() {
        step(sink, &mut at, p, i + 1);
        sink.drop_off(first + i, p);
    }
    debug_assert!(l == deposits.len());
    step(sink, &mut at, last_pickup, 0);
    last_pickup
}

fn check_sorted(values: &[f64], what: &str) -> Result<()> {
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(contract(format!("{what} must be sorted ascending")));
    }
    Ok(())
}

/// Runs a single greedy round from `y0` and records it.
pub fn greedy_procedure(y0: f64, sensors: &[f64], deposits: &[f64]) -> Result<Trajectory> {
    if sensors.is_empty() {
        return Err(contract("a greedy round needs at least one sensor"));
    }
    if sensors.len() != deposits.len() {
        return Err(contract(format!(
            "{} sensors but {} deposits",
            sensors.len(),
            deposits.len()
        )));
    }
    check_sorted(sensors, "sensors")?;
    check_sorted(deposits, "deposits")?;
    if y0 > sensors[0] {
        return Err(contract(format!(
            "robot start {y0} lies beyond the first sensor {}",
            sensors[0]
        )));
    }
    let mut rec = Recorder::default();
    let end = greedy_round(&mut rec, y0, sensors, deposits, 0);
    Ok(rec.finish(end))
}

/// Sensor index ranges of the rounds of the offset-`j` schedule, in order.
pub fn offset_rounds(n: usize, k: usize, j: usize) -> Vec<Range<usize>> {
    let mut rounds = Vec::with_capacity((n / k.max(1)) + 2);
    if j > 0 {
        rounds.push(0..j.min(n));
    }
    let full = n.saturating_sub(j) / k;
    for i in 0..full {
        rounds.push(j + k * i..j + k * (i + 1));
    }
    let covered = j + k * full;
    if covered < n {
        rounds.push(covered..n);
    }
    rounds
}

/// Drives the offset-`j` schedule into `sink`; returns the end position.
pub(crate) fn run_schedule<S: RobotSink>(
    sink: &mut S,
    positions: &[f64],
    targets: &[f64],
    k: usize,
    j: usize,
) -> f64 {
    let mut at = 0.0;
    for round in offset_rounds(positions.len(), k, j) {
        let first = round.start;
        at = greedy_round(sink, at, &positions[round.clone()], &targets[round], first);
    }
    at
}

fn check_schedule(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    j: usize,
) -> Result<()> {
    if plan.len() != deployment.len() {
        return Err(contract(format!(
            "plan has {} targets for {} sensors",
            plan.len(),
            deployment.len()
        )));
    }
    let robot = RobotSpec::new(k, deployment.len())?;
    robot.check_offset(j)
}

/// Full trajectory of the offset-`j` schedule with capacity `k`.
pub fn gm_offset_trajectory(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    j: usize,
) -> Result<Trajectory> {
    check_schedule(deployment, plan, k, j)?;
    let mut rec = Recorder::default();
    let end = run_schedule(&mut rec, deployment.positions(), plan.targets(), k, j);
    Ok(rec.finish(end))
}

/// Same total as [`gm_offset_trajectory`] (bit for bit) without storing legs.
pub fn gm_offset_distance(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    j: usize,
) -> Result<f64> {
    check_schedule(deployment, plan, k, j)?;
    let mut odo = Odometer::default();
    run_schedule(&mut odo, deployment.positions(), plan.targets(), k, j);
    Ok(odo.distance)
}

fn check_exponent(a: f64) -> Result<()> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(invalid(format!(
            "cost exponent must be at least 1, got {a}"
        )));
    }
    Ok(())
}

/// `distance^a`: the power applies to the whole distance, not per leg.
pub fn distance_cost(distance: f64, a: f64) -> Result<f64> {
    check_exponent(a)?;
    Ok(distance.powf(a))
}

pub fn robot_cost(trajectory: &Trajectory, a: f64) -> Result<f64> {
    distance_cost(trajectory.total_distance(), a)
}

/// `Σ |M_i|^a`.
pub fn autonomous_cost_line(displacements: &[f64], a: f64) -> f64 {
    displacements.iter().map(|m| m.abs().powf(a)).sum()
}

/// `max |M_i|^a`.
pub fn max_displacement_cost(displacements: &[f64], a: f64) -> f64 {
    displacements
        .iter()
        .map(|m| m.abs().powf(a))
        .fold(0.0, f64::max)
}

/// Upper bound on the best-offset robot cost:
/// `6^a X_n^a + (4⌊n/k⌋ + 16)^(a-1) (2|M_1|^a + 2|M_n|^a + 4 T_AS / k)`.
pub fn theorem1_bound(
    x_n: f64,
    m_first: f64,
    m_last: f64,
    t_as: f64,
    n: usize,
    k: usize,
    a: f64,
) -> f64 {
    let blocks = (4 * (n / k) + 16) as f64;
    6f64.powf(a) * x_n.powf(a)
        + blocks.powf(a - 1.0)
            * (2.0 * m_first.abs().powf(a) + 2.0 * m_last.abs().powf(a) + 4.0 * t_as / k as f64)
}

/// Per-round bound `2|M_1| + 2|M_l| + 3 (Y_l - Y_0)`.
pub fn lemma1_bound(m_first: f64, m_last: f64, span: f64) -> Result<f64> {
    if span < 0.0 {
        return Err(contract(format!(
            "round span must be non-negative, got {span}"
        )));
    }
    Ok(2.0 * m_first.abs() + 2.0 * m_last.abs() + 3.0 * span)
}

/// Every schedule must at least reach the last sensor: `X_n^a`.
pub fn lower_bound_line(x_n: f64, a: f64) -> f64 {
    x_n.powf(a)
}

/// Leading-order expectation sandwich `(lower, upper)` for the best-offset
/// cost under a rate-`rate` Poisson deployment, given estimates of the
/// largest expected `|M_i|^a` and of the expected autonomous cost.
pub fn expected_bounds_line(
    n: usize,
    rate: f64,
    k: usize,
    a: f64,
    emax_estimate: f64,
    eas_estimate: f64,
) -> (f64, f64) {
    let scale = (n as f64 / rate).powf(a);
    let blocks = (4 * (n / k) + 16) as f64;
    let upper = 6f64.powf(a) * scale
        + blocks.powf(a - 1.0) * (4.0 * emax_estimate + 4.0 * eas_estimate / k as f64);
    (scale, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub a: f64,
    /// Robot cost of offset `j` at index `j`.
    pub per_offset_cost: Vec<f64>,
    pub min_cost: f64,
    /// Smallest offset attaining `min_cost`.
    pub argmin_offset: usize,
    pub autonomous_cost: f64,
    pub max_displacement_cost: f64,
    pub theorem1_bound: f64,
    pub lower_bound: f64,
}

/// Smallest value and the first index attaining it.
pub(crate) fn first_min(values: &[f64]) -> (f64, usize) {
    values
        .iter()
        .enumerate()
        .fold((f64::INFINITY, 0), |(best, at), (i, &v)| {
            if v < best {
                (v, i)
            } else {
                (best, at)
            }
        })
}

/// Evaluates every offset `0..k` and fills in the bounds for this instance.
pub fn best_over_offsets(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    a: f64,
) -> Result<CostReport> {
    check_exponent(a)?;
    check_schedule(deployment, plan, k, 0)?;
    let per_offset_cost = (0..k)
        .map(|j| gm_offset_distance(deployment, plan, k, j).map(|d| d.powf(a)))
        .collect::<Result<Vec<_>>>()?;
    let (min_cost, argmin_offset) = first_min(&per_offset_cost);
    Ok(fill_report(
        deployment,
        plan,
        k,
        a,
        per_offset_cost,
        min_cost,
        argmin_offset,
    ))
}

/// Report for a single fixed offset; `min_cost` is that offset's cost.
pub fn cost_at_offset(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    j: usize,
    a: f64,
) -> Result<CostReport> {
    check_exponent(a)?;
    let cost = gm_offset_distance(deployment, plan, k, j)?.powf(a);
    Ok(fill_report(deployment, plan, k, a, vec![cost], cost, j))
}

fn fill_report(
    deployment: &Deployment1D,
    plan: &TargetPlan1D,
    k: usize,
    a: f64,
    per_offset_cost: Vec<f64>,
    min_cost: f64,
    argmin_offset: usize,
) -> CostReport {
    let m = plan.displacements();
    let autonomous_cost = autonomous_cost_line(m, a);
    let x_n = deployment.last();
    CostReport {
        a,
        per_offset_cost,
        min_cost,
        argmin_offset,
        autonomous_cost,
        max_displacement_cost: max_displacement_cost(m, a),
        theorem1_bound: theorem1_bound(
            x_n,
            m[0],
            m[m.len() - 1],
            autonomous_cost,
            deployment.len(),
            k,
            a,
        ),
        lower_bound: lower_bound_line(x_n, a),
    }
}
