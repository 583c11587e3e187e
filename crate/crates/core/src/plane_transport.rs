//! Greedy robot transport on an `m × m` grid, moving only along the axes.
//!
//! Phase 1 visits rows in ascending order: climb the y-axis to the row,
//! run the offset-`j2` line schedule on the row's x-coordinates, walk back
//! to `x = 0`. The robot then returns to the origin. Phase 2 visits columns
//! in ascending order: walk the x-axis to the column's final x, run the
//! offset-`j1` line schedule on the y-coordinates, walk back to `y = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};
use crate::line_transport::{first_min, run_schedule, RobotSink};
use crate::stochastic::GridDeployment2D;
use crate::targets::{validate_plane_targets, TargetPlan2D, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Rows,
    Return,
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegKind {
    /// Positioning walk along an axis.
    Walk,
    /// Part of a line schedule run inside a row or column.
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneLeg {
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub carried: usize,
    pub phase: Phase,
    pub kind: LegKind,
}

impl PlaneLeg {
    pub fn length(&self) -> f64 {
        (self.to[0] - self.from[0]).abs() + (self.to[1] - self.from[1]).abs()
    }

    pub fn is_axis_aligned(&self) -> bool {
        self.from[0] == self.to[0] || self.from[1] == self.to[1]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseBreakdown {
    pub phase1: f64,
    pub return_leg: f64,
    pub phase2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneTrajectory {
    legs: Vec<PlaneLeg>,
    total_distance: f64,
    phase_breakdown: PhaseBreakdown,
    final_positions: Vec<[f64; 2]>,
}

impl PlaneTrajectory {
    pub fn legs(&self) -> &[PlaneLeg] {
        &self.legs
    }

    /// `phase1 + return_leg + phase2`, each phase summed in travel order.
    pub fn total_distance(&self) -> f64 {
        self.total_distance
    }

    pub fn phase_breakdown(&self) -> PhaseBreakdown {
        self.phase_breakdown
    }

    /// Final position of sensor `(i1, i2)` at index `i2 * m + i1`.
    pub fn final_positions(&self) -> &[[f64; 2]] {
        &self.final_positions
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trajectory serializes")
    }
}

/// Horizontal or vertical line schedule embedded in the plane.
#[derive(Clone, Copy)]
enum Axis {
    /// Row at the given y; the line coordinate is x.
    Row(f64),
    /// Column at the given x; the line coordinate is y.
    Column(f64),
}

impl Axis {
    fn point(self, t: f64) -> [f64; 2] {
        match self {
            Axis::Row(y) => [t, y],
            Axis::Column(x) => [x, t],
        }
    }
}

/// Collects plane legs, or just per-phase distances when `legs` is `None`.
struct PlaneSink {
    legs: Option<Vec<PlaneLeg>>,
    breakdown: PhaseBreakdown,
    phase: Phase,
    kind: LegKind,
    axis: Axis,
    dropped: Vec<(usize, f64)>,
}

impl PlaneSink {
    fn new(record: bool) -> Self {
        Self {
            legs: record.then(Vec::new),
            breakdown: PhaseBreakdown::default(),
            phase: Phase::Rows,
            kind: LegKind::Walk,
            axis: Axis::Row(0.0),
            dropped: Vec::new(),
        }
    }

    fn add(&mut self, from: [f64; 2], to: [f64; 2], carried: usize) {
        if from == to {
            return;
        }
        debug_assert!(from[0] == to[0] || from[1] == to[1]);
        let length = (to[0] - from[0]).abs() + (to[1] - from[1]).abs();
        match self.phase {
            Phase::Rows => self.breakdown.phase1 += length,
            Phase::Return => self.breakdown.return_leg += length,
            Phase::Columns => self.breakdown.phase2 += length,
        }
        if let Some(legs) = self.legs.as_mut() {
            legs.push(PlaneLeg {
                from,
                to,
                carried,
                phase: self.phase,
                kind: self.kind,
            });
        }
    }

    fn walk(&mut self, from: [f64; 2], to: [f64; 2]) {
        self.kind = LegKind::Walk;
        self.add(from, to, 0);
    }
}

impl RobotSink for PlaneSink {
    fn leg(&mut self, from: f64, to: f64, carried: usize) {
        self.kind = LegKind::Greedy;
        let (a, b) = (self.axis.point(from), self.axis.point(to));
        self.add(a, b, carried);
    }

    fn drop_off(&mut self, sensor: usize, at: f64) {
        self.dropped.push((sensor, at));
    }
}

fn check_plane(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j1: usize,
    j2: usize,
) -> Result<()> {
    let m = grid.side();
    if plan.x_plan().len() != m || plan.y_plan().len() != m {
        return Err(contract(format!("plan does not match a {m}×{m} grid")));
    }
    if k < 1 || k > m {
        return Err(invalid(format!("capacity {k} outside 1..={m}")));
    }
    if j1 >= k || j2 >= k {
        return Err(invalid(format!("offsets ({j1}, {j2}) outside 0..{k}")));
    }
    Ok(())
}

/// Phase 1 (rows, offset `j2`). Returns the robot's y when done.
fn run_rows(
    sink: &mut PlaneSink,
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j2: usize,
    finals: Option<&mut [[f64; 2]]>,
) -> f64 {
    let m = grid.side();
    let xs = grid.xs().positions();
    let x_targets = plan.x_plan().targets();
    sink.phase = Phase::Rows;
    let mut y_at = 0.0;
    let mut finals = finals;
    for (i2, &y) in grid.ys().positions().iter().enumerate() {
        sink.walk([0.0, y_at], [0.0, y]);
        y_at = y;
        sink.axis = Axis::Row(y);
        sink.dropped.clear();
        let x_end = run_schedule(sink, xs, x_targets, k, j2);
        if let Some(f) = finals.as_deref_mut() {
            for &(i1, x) in &sink.dropped {
                f[i2 * m + i1][0] = x;
            }
        }
        sink.walk([x_end, y], [0.0, y]);
    }
    y_at
}

/// Phase 2 (columns, offset `j1`).
fn run_columns(
    sink: &mut PlaneSink,
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j1: usize,
    finals: Option<&mut [[f64; 2]]>,
) {
    let m = grid.side();
    let ys = grid.ys().positions();
    let y_targets = plan.y_plan().targets();
    sink.phase = Phase::Columns;
    let mut x_at = 0.0;
    let mut finals = finals;
    for (i1, &x) in plan.x_plan().targets().iter().enumerate() {
        sink.walk([x_at, 0.0], [x, 0.0]);
        x_at = x;
        sink.axis = Axis::Column(x);
        sink.dropped.clear();
        let y_end = run_schedule(sink, ys, y_targets, k, j1);
        if let Some(f) = finals.as_deref_mut() {
            for &(i2, y) in &sink.dropped {
                f[i2 * m + i1][1] = y;
            }
        }
        sink.walk([x, y_end], [x, 0.0]);
    }
}

/// Full plane trajectory for offsets `(j1, j2)` with capacity `k`.
pub fn gm_plane_trajectory(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j1: usize,
    j2: usize,
) -> Result<PlaneTrajectory> {
    check_plane(grid, plan, k, j1, j2)?;
    let m = grid.side();
    let mut finals = vec![[f64::NAN; 2]; m * m];
    for (idx, f) in finals.iter_mut().enumerate() {
        let (i1, i2) = (idx % m, idx / m);
        *f = [grid.xs().positions()[i1], grid.ys().positions()[i2]];
    }
    let mut sink = PlaneSink::new(true);
    let y_top = run_rows(&mut sink, grid, plan, k, j2, Some(&mut finals));
    sink.phase = Phase::Return;
    sink.walk([0.0, y_top], [0.0, 0.0]);
    run_columns(&mut sink, grid, plan, k, j1, Some(&mut finals));
    let b = sink.breakdown;
    Ok(PlaneTrajectory {
        legs: sink.legs.unwrap_or_default(),
        total_distance: b.phase1 + b.return_leg + b.phase2,
        phase_breakdown: b,
        final_positions: finals,
    })
}

fn rows_distance(grid: &GridDeployment2D, plan: &TargetPlan2D, k: usize, j2: usize) -> (f64, f64) {
    let mut sink = PlaneSink::new(false);
    let y_top = run_rows(&mut sink, grid, plan, k, j2, None);
    (sink.breakdown.phase1, y_top)
}

fn columns_distance(grid: &GridDeployment2D, plan: &TargetPlan2D, k: usize, j1: usize) -> f64 {
    let mut sink = PlaneSink::new(false);
    run_columns(&mut sink, grid, plan, k, j1, None);
    sink.breakdown.phase2
}

/// Total distance for `(j1, j2)`, equal bit for bit to the trajectory total.
pub fn gm_plane_distance(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j1: usize,
    j2: usize,
) -> Result<f64> {
    check_plane(grid, plan, k, j1, j2)?;
    let (phase1, y_top) = rows_distance(grid, plan, k, j2);
    Ok(phase1 + y_top + columns_distance(grid, plan, k, j1))
}

/// `m · (Σ|M_i|^a + Σ|N_i|^a)`: every grid sensor moves once per axis.
pub fn autonomous_cost_plane(
    x_displacements: &[f64],
    y_displacements: &[f64],
    a: f64,
) -> Result<f64> {
    if x_displacements.len() != y_displacements.len() {
        return Err(contract("axis displacement lists differ in length"));
    }
    let m = x_displacements.len() as f64;
    let sum = |ds: &[f64]| ds.iter().map(|d| d.abs().powf(a)).sum::<f64>();
    Ok(m * (sum(x_displacements) + sum(y_displacements)))
}

/// Upper bound on the best offset-pair plane cost, term by term:
///
/// ```text
/// 4^a n^(a/2-1/2) F T_AS/k
///   + 4^(a-1) n^(a/2) F (2|M_1|^a + 2|M_m|^a)
///   + 4^(a-1) n^(a/2) F (2|N_1|^a + 2|N_m|^a)
///   + (2^(3a-1) + 6^a 4^(a-1) n^(a/2)) Y_m^a
///   + (4^(a-1)  + 6^a 4^(a-1) n^(a/2)) X_m^a
/// ```
/// with `F = (4⌊√n/k⌋ + 16)^(a-1)`.
#[allow(clippy::too_many_arguments)]
pub fn theorem2_bound(
    x_m: f64,
    y_m: f64,
    m_first: f64,
    m_last: f64,
    n_first: f64,
    n_last: f64,
    t_as2: f64,
    n: usize,
    k: usize,
    a: f64,
) -> f64 {
    let side = (n as f64).sqrt().round() as usize;
    let f = ((4 * (side / k) + 16) as f64).powf(a - 1.0);
    let nf = n as f64;
    let n_half = nf.powf(a / 2.0);
    let four_am1 = 4f64.powf(a - 1.0);
    let p = |v: f64| v.abs().powf(a);

    4f64.powf(a) * nf.powf(a / 2.0 - 0.5) * f * t_as2 / k as f64
        + four_am1 * n_half * f * (2.0 * p(m_first) + 2.0 * p(m_last))
        + four_am1 * n_half * f * (2.0 * p(n_first) + 2.0 * p(n_last))
        + (2f64.powf(3.0 * a - 1.0) + 6f64.powf(a) * four_am1 * n_half) * y_m.powf(a)
        + (four_am1 + 6f64.powf(a) * four_am1 * n_half) * x_m.powf(a)
}

/// `n^(a/2) (X_m - X_1)^a`: every row walk spans the x-range.
pub fn lower_bound_plane(x_first: f64, x_m: f64, n: usize, a: f64) -> Result<f64> {
    if x_m < x_first {
        return Err(contract(format!("x range is reversed: {x_first} > {x_m}")));
    }
    Ok((n as f64).powf(a / 2.0) * (x_m - x_first).powf(a))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCostReport {
    pub a: f64,
    /// `per_offset_cost[j1][j2]`.
    pub per_offset_cost: Vec<Vec<f64>>,
    pub min_cost: f64,
    /// Lexicographically smallest `(j1, j2)` attaining `min_cost`.
    pub argmin: (usize, usize),
    pub autonomous_cost: f64,
    pub theorem2_bound: f64,
    pub lower_bound: f64,
}

/// Evaluates every offset pair. Phase 1 depends only on `j2` and phase 2
/// only on `j1`, so each phase is simulated once per offset and combined.
pub fn best_over_offsets_plane(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    a: f64,
) -> Result<PlaneCostReport> {
    check_plane(grid, plan, k, 0, 0)?;
    if !(a >= 1.0) {
        return Err(invalid(format!(
            "cost exponent must be at least 1, got {a}"
        )));
    }
    let rows: Vec<(f64, f64)> = (0..k).map(|j2| rows_distance(grid, plan, k, j2)).collect();
    let cols: Vec<f64> = (0..k)
        .map(|j1| columns_distance(grid, plan, k, j1))
        .collect();
    let per_offset_cost: Vec<Vec<f64>> = cols
        .iter()
        .map(|&c| {
            rows.iter()
                .map(|&(r, y_top)| (r + y_top + c).powf(a))
                .collect()
        })
        .collect();
    Ok(plane_report(grid, plan, k, a, per_offset_cost))
}

/// Report for one fixed offset pair (a 1×1 matrix).
pub fn plane_cost_at_offsets(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    j1: usize,
    j2: usize,
    a: f64,
) -> Result<PlaneCostReport> {
    if !(a >= 1.0) {
        return Err(invalid(format!(
            "cost exponent must be at least 1, got {a}"
        )));
    }
    let cost = gm_plane_distance(grid, plan, k, j1, j2)?.powf(a);
    let mut report = plane_report(grid, plan, k, a, vec![vec![cost]]);
    report.argmin = (j1, j2);
    Ok(report)
}

fn plane_report(
    grid: &GridDeployment2D,
    plan: &TargetPlan2D,
    k: usize,
    a: f64,
    per_offset_cost: Vec<Vec<f64>>,
) -> PlaneCostReport {
    let flat: Vec<f64> = per_offset_cost.iter().flatten().copied().collect();
    let width = per_offset_cost[0].len();
    let (min_cost, at) = first_min(&flat);
    let mx = plan.x_plan().displacements();
    let my = plan.y_plan().displacements();
    let autonomous_cost = autonomous_cost_plane(mx, my, a).expect("axis plans share a length");
    let xs = grid.xs();
    let n = grid.n();
    PlaneCostReport {
        a,
        min_cost,
        argmin: (at / width, at % width),
        per_offset_cost,
        autonomous_cost,
        theorem2_bound: theorem2_bound(
            xs.last(),
            grid.ys().last(),
            mx[0],
            mx[mx.len() - 1],
            my[0],
            my[my.len() - 1],
            autonomous_cost,
            n,
            k,
            a,
        ),
        lower_bound: lower_bound_plane(xs.positions()[0], xs.last(), n, a)
            .expect("positions are sorted"),
    }
}

/// Validates where the sensors actually ended up. Coverage and spacing are
/// only meaningful when the result is still a grid, so a broken grid
/// structure fails both checks.
pub fn validate_final_grid(
    trajectory: &PlaneTrajectory,
    m: usize,
    r2: f64,
    s: f64,
) -> ValidationReport {
    let finals = trajectory.final_positions();
    let xs: Vec<f64> = (0..m).map(|i1| finals[i1][0]).collect();
    let ys: Vec<f64> = (0..m).map(|i2| finals[i2 * m][1]).collect();
    let is_grid = finals
        .iter()
        .enumerate()
        .all(|(idx, p)| p[0] == xs[idx % m] && p[1] == ys[idx / m]);
    let sorted = xs.windows(2).all(|w| w[0] <= w[1]) && ys.windows(2).all(|w| w[0] <= w[1]);
    let mut report = validate_plane_targets(&xs, &ys, r2, s);
    if !is_grid || !sorted {
        report.coverage = false;
        report.interference = false;
    }
    report
}
