//! Monte Carlo harness: seeded trials, group averaging, sweeps over `n`,
//! log-log power-law fits and the reference curves of the published figures.
//!
//! Trial `t` at size `n` draws its deployment from
//! `derive_seed(master_seed, n, t)` and nothing else, so trials run in
//! parallel and are collected back in index order before any aggregation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};
use crate::line_transport::{best_over_offsets, cost_at_offset, gm_offset_trajectory};
use crate::plane_transport::{
    best_over_offsets_plane, gm_plane_trajectory, plane_cost_at_offsets, validate_final_grid,
};
use crate::stochastic::{derive_seed, sample_grid, sample_poisson_arrivals};
use crate::targets::{line_targets, plane_targets, validate_line_targets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Line,
    Plane,
}

/// Arrival rate of the deployment, as a function of the sensor count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateRule {
    /// `λ = n`
    N,
    /// `λ = √n`
    SqrtN,
    Fixed(f64),
}

impl RateRule {
    pub fn rate(&self, n: usize) -> f64 {
        match *self {
            RateRule::N => n as f64,
            RateRule::SqrtN => (n as f64).sqrt(),
            RateRule::Fixed(rate) => rate,
        }
    }
}

/// Robot capacity as a function of the sensor count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityRule {
    One,
    /// `k = ⌈√n⌉`; on a grid of `n = m²` sensors this is `m`.
    CeilSqrtN,
    N,
    Fixed(usize),
}

impl CapacityRule {
    pub fn capacity(&self, n: usize) -> usize {
        match *self {
            CapacityRule::One => 1,
            CapacityRule::CeilSqrtN => ceil_sqrt(n),
            CapacityRule::N => n,
            CapacityRule::Fixed(k) => k,
        }
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Exact square root of a perfect square.
pub fn grid_side(n: usize) -> Option<usize> {
    let r = ceil_sqrt(n);
    (r * r == n).then_some(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetPolicy {
    /// Always run offset 0 (offset pair (0, 0) on the plane).
    Zero,
    /// Take the cheapest offset (pair).
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub geometry: Geometry,
    /// Total sensor counts; perfect squares for the plane.
    pub n_values: Vec<usize>,
    pub rate_rule: RateRule,
    pub capacity_rule: CapacityRule,
    pub a: f64,
    pub stretch: f64,
    pub trials: usize,
    pub group_size: usize,
    pub master_seed: u64,
    pub offset_policy: OffsetPolicy,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(invalid("no sensor counts to run"));
        }
        if self.n_values.contains(&0) {
            return Err(invalid("sensor counts must be positive"));
        }
        if self.trials == 0 || self.group_size == 0 {
            return Err(invalid("trials and group size must be positive"));
        }
        if !self.trials.is_multiple_of(self.group_size) {
            return Err(invalid(format!(
                "{} trials do not split into groups of {}",
                self.trials, self.group_size
            )));
        }
        if !(self.a >= 1.0) || !(self.stretch >= 1.0) {
            return Err(invalid("cost exponent and stretch must both be at least 1"));
        }
        if self.geometry == Geometry::Plane {
            if let Some(&bad) = self.n_values.iter().find(|&&n| grid_side(n).is_none()) {
                return Err(invalid(format!(
                    "plane sensor count {bad} is not a perfect square"
                )));
            }
        }
        Ok(())
    }

    /// Sensors per axis: `n` on the line, `√n` on the plane.
    pub fn axis_count(&self, n: usize) -> usize {
        match self.geometry {
            Geometry::Line => n,
            Geometry::Plane => grid_side(n).unwrap_or(0),
        }
    }
}

/// One simulated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial_index: usize,
    pub seed: u64,
    pub total_distance: f64,
    pub robot_cost: f64,
    pub autonomous_cost: f64,
    pub bound_upper: f64,
    pub bound_lower: f64,
    pub valid_coverage: bool,
    pub valid_interference: bool,
}

/// Simulates one trial of `spec` at size `n` from an explicit seed.
pub fn run_trial(
    spec: &ExperimentSpec,
    n: usize,
    trial_index: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let rate = spec.rate_rule.rate(n);
    let k = spec.capacity_rule.capacity(n);
    // r = 1/(2λ) and s = stretch/λ: the anchor spacing equals s exactly
    let r = 1.0 / (2.0 * rate);
    let s = spec.stretch / rate;
    let a = spec.a;
    match spec.geometry {
        Geometry::Line => {
            let deployment = sample_poisson_arrivals(n, rate, seed)?;
            let plan = line_targets(&deployment, r, s, spec.stretch)?;
            let report = match spec.offset_policy {
                OffsetPolicy::Zero => cost_at_offset(&deployment, &plan, k, 0, a)?,
                OffsetPolicy::Minimize => best_over_offsets(&deployment, &plan, k, a)?,
            };
            let trajectory = gm_offset_trajectory(&deployment, &plan, k, report.argmin_offset)?;
            let finals = trajectory.deposited_positions(n);
            let validity = validate_line_targets(&finals, plan.sensing_radius(), s);
            let landed = finals.iter().zip(plan.targets()).all(|(f, t)| f == t);
            Ok(TrialRecord {
                n,
                trial_index,
                seed,
                total_distance: trajectory.total_distance(),
                robot_cost: report.min_cost,
                autonomous_cost: report.autonomous_cost,
                bound_upper: report.theorem1_bound,
                bound_lower: report.lower_bound,
                valid_coverage: landed && validity.coverage,
                valid_interference: landed && validity.interference,
            })
        }
        Geometry::Plane => {
            let m = grid_side(n).ok_or_else(|| invalid(format!("{n} is not a perfect square")))?;
            let grid = sample_grid(m, rate, seed)?;
            let plan = plane_targets(&grid, r, s, spec.stretch)?;
            let report = match spec.offset_policy {
                OffsetPolicy::Zero => plane_cost_at_offsets(&grid, &plan, k, 0, 0, a)?,
                OffsetPolicy::Minimize => best_over_offsets_plane(&grid, &plan, k, a)?,
            };
            let (j1, j2) = report.argmin;
            let trajectory = gm_plane_trajectory(&grid, &plan, k, j1, j2)?;
            let validity = validate_final_grid(&trajectory, m, plan.square_sensing_radius(), s);
            Ok(TrialRecord {
                n,
                trial_index,
                seed,
                total_distance: trajectory.total_distance(),
                robot_cost: report.min_cost,
                autonomous_cost: report.autonomous_cost,
                bound_upper: report.theorem2_bound,
                bound_lower: report.lower_bound,
                valid_coverage: validity.coverage,
                valid_interference: validity.interference,
            })
        }
    }
}

/// All `spec.trials` trials at size `n`, run in parallel, returned in trial order.
pub fn run_trials(spec: &ExperimentSpec, n: usize) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(
                spec,
                n,
                t,
                derive_seed(spec.master_seed, n as u64, t as u64),
            )
        })
        .collect()
}

/// Serial twin of [`run_trials`]; yields identical records.
pub fn run_trials_serial(spec: &ExperimentSpec, n: usize) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    (0..spec.trials)
        .map(|t| {
            run_trial(
                spec,
                n,
                t,
                derive_seed(spec.master_seed, n as u64, t as u64),
            )
        })
        .collect()
}

/// Means of consecutive, non-overlapping blocks of `group_size` values.
pub fn group_means(values: &[f64], group_size: usize) -> Result<Vec<f64>> {
    if group_size == 0 || !values.len().is_multiple_of(group_size) {
        return Err(invalid(format!(
            "{} values do not split into groups of {group_size}",
            values.len()
        )));
    }
    Ok(values
        .chunks(group_size)
        .map(|c| c.iter().sum::<f64>() / group_size as f64)
        .collect())
}

/// One row of the sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub n: usize,
    pub group_index: usize,
    pub mean_distance: f64,
    pub mean_robot_cost: f64,
    pub mean_autonomous_cost: f64,
    pub mean_bound_upper: f64,
    pub mean_bound_lower: f64,
}

impl GroupRow {
    pub const CSV_HEADER: &'static str =
        "n,group_index,mean_distance,mean_robot_cost,mean_autonomous_cost,mean_bound_upper,mean_bound_lower";

    /// Comma-separated, shortest round-trip decimals.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.group_index,
            self.mean_distance,
            self.mean_robot_cost,
            self.mean_autonomous_cost,
            self.mean_bound_upper,
            self.mean_bound_lower
        )
    }
}

pub fn group_rows(records: &[TrialRecord], group_size: usize) -> Result<Vec<GroupRow>> {
    let column = |f: fn(&TrialRecord) -> f64| {
        group_means(&records.iter().map(f).collect::<Vec<_>>(), group_size)
    };
    let distance = column(|r| r.total_distance)?;
    let cost = column(|r| r.robot_cost)?;
    let autonomous = column(|r| r.autonomous_cost)?;
    let upper = column(|r| r.bound_upper)?;
    let lower = column(|r| r.bound_lower)?;
    Ok((0..distance.len())
        .map(|g| GroupRow {
            n: records[g * group_size].n,
            group_index: g,
            mean_distance: distance[g],
            mean_robot_cost: cost[g],
            mean_autonomous_cost: autonomous[g],
            mean_bound_upper: upper[g],
            mean_bound_lower: lower[g],
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub constant: f64,
}

impl PowerLawFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.constant * n.powf(self.exponent)
    }
}

/// Least squares of `ln mean` on `ln n`: `mean ≈ constant · n^exponent`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.iter().any(|&(n, mean)| !(n > 0.0) || !(mean > 0.0)) {
        return Err(Error::FitUnavailable(
            "sizes and means must be positive".into(),
        ));
    }
    let first = points.first().map(|p| p.0);
    if points.len() < 2 || points.iter().all(|p| Some(p.0) == first) {
        return Err(Error::FitUnavailable(
            "need at least two distinct sizes".into(),
        ));
    }
    let count = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(n, m)| (sx + n.ln(), sy + m.ln()));
    let (mx, my) = (sx / count, sy / count);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(n, m)| {
        let dx = n.ln() - mx;
        (sxy + dx * (m.ln() - my), sxx + dx * dx)
    });
    let exponent = sxy / sxx;
    Ok(PowerLawFit {
        exponent,
        constant: (my - exponent * mx).exp(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub spec: ExperimentSpec,
    /// `(n, group mean of robot cost)`, ordered by `n` then group.
    pub points: Vec<(usize, f64)>,
    pub groups: Vec<GroupRow>,
    /// `None` when fewer than two distinct sizes were swept.
    pub fit: Option<PowerLawFit>,
}

impl SweepSeries {
    pub fn fit_exponent(&self) -> Option<f64> {
        self.fit.map(|f| f.exponent)
    }

    pub fn fit_constant(&self) -> Option<f64> {
        self.fit.map(|f| f.constant)
    }
}

/// Result of a sweep plus the raw records behind it.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub series: SweepSeries,
    pub records: Vec<TrialRecord>,
}

pub fn sweep_with_records(spec: &ExperimentSpec) -> Result<SweepRun> {
    spec.validate()?;
    let mut n_values = spec.n_values.clone();
    n_values.sort_unstable();
    n_values.dedup();
    let mut records = Vec::new();
    let mut groups = Vec::new();
    for &n in &n_values {
        let batch = run_trials(spec, n)?;
        groups.extend(group_rows(&batch, spec.group_size)?);
        records.extend(batch);
    }
    let points: Vec<(usize, f64)> = groups.iter().map(|g| (g.n, g.mean_robot_cost)).collect();
    let float_points: Vec<(f64, f64)> = points.iter().map(|&(n, c)| (n as f64, c)).collect();
    let fit = fit_power_law(&float_points).ok();
    Ok(SweepRun {
        series: SweepSeries {
            spec: spec.clone(),
            points,
            groups,
            fit,
        },
        records,
    })
}

pub fn sweep(spec: &ExperimentSpec) -> Result<SweepSeries> {
    Ok(sweep_with_records(spec)?.series)
}

/// Figures of the numerical evaluation, each with a preset experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }

    /// The experiment behind the figure with the published trial counts,
    /// group sizes and size grids.
    pub fn preset(&self) -> ExperimentSpec {
        let squares_to_55: Vec<usize> = (1..=55).map(|i| i * i).collect();
        let sixties_to_3000: Vec<usize> = (1..=50).map(|i| 60 * i).collect();
        let line =
            |n_values: Vec<usize>, capacity_rule, a, stretch, trials, group_size| ExperimentSpec {
                geometry: Geometry::Line,
                n_values,
                rate_rule: RateRule::N,
                capacity_rule,
                a,
                stretch,
                trials,
                group_size,
                master_seed: 2021,
                offset_policy: OffsetPolicy::Zero,
            };
        let plane = |capacity_rule| ExperimentSpec {
            geometry: Geometry::Plane,
            n_values: squares_to_55.clone(),
            rate_rule: RateRule::SqrtN,
            capacity_rule,
            a: 1.0,
            stretch: 1.2,
            trials: 100,
            group_size: 5,
            master_seed: 2021,
            offset_policy: OffsetPolicy::Zero,
        };
        match self {
            FigureId::Fig3 => line(squares_to_55.clone(), CapacityRule::One, 1.0, 1.0, 100, 5),
            FigureId::Fig5 => line(squares_to_55.clone(), CapacityRule::One, 1.0, 1.2, 100, 5),
            FigureId::Fig4 => line(sixties_to_3000, CapacityRule::CeilSqrtN, 1.0, 1.0, 50, 10),
            FigureId::Fig6 => line(sixties_to_3000, CapacityRule::N, 1.0, 1.2, 50, 10),
            FigureId::Fig7 => line(sixties_to_3000, CapacityRule::CeilSqrtN, 2.0, 1.0, 50, 10),
            FigureId::Fig8 => line(sixties_to_3000, CapacityRule::N, 2.0, 1.2, 50, 10),
            FigureId::Fig9 => plane(CapacityRule::One),
            FigureId::Fig10 => plane(CapacityRule::CeilSqrtN),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s.to_ascii_lowercase())
            .ok_or_else(|| invalid(format!("unknown figure '{s}' (expected fig3..fig10)")))
    }
}

/// Expected growth of a figure's series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCurve {
    pub figure: FigureId,
    /// Growth exponent in `n` of the Θ-class.
    pub exponent: f64,
    /// Leading constant when the caption gives a closed form.
    pub constant: Option<f64>,
    pub label: &'static str,
}

impl ReferenceCurve {
    /// Closed-form value at `n`, if the caption has one.
    pub fn value(&self, n: f64) -> Option<f64> {
        self.constant.map(|c| c * n.powf(self.exponent))
    }
}

/// `√2 / Γ(5/2)`, the leading constant of the unit-capacity tight-layout series.
pub fn fig3_constant() -> f64 {
    2f64.sqrt() / gamma(2.5)
}

pub fn reference_curve(figure: FigureId) -> ReferenceCurve {
    let (exponent, constant, label) = match figure {
        FigureId::Fig3 => (0.5, Some(fig3_constant()), "sqrt(2)/Gamma(5/2) * sqrt(n)"),
        FigureId::Fig5 => (1.0, Some(0.2), "n/5"),
        FigureId::Fig4 | FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8 => {
            (0.0, None, "Theta(1)")
        }
        FigureId::Fig9 => (1.0, None, "Theta(n)"),
        FigureId::Fig10 => (0.5, None, "Theta(sqrt(n))"),
    };
    ReferenceCurve {
        figure,
        exponent,
        constant,
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(geometry: Geometry) -> ExperimentSpec {
        ExperimentSpec {
            geometry,
            n_values: vec![16, 36],
            rate_rule: match geometry {
                Geometry::Line => RateRule::N,
                Geometry::Plane => RateRule::SqrtN,
            },
            capacity_rule: CapacityRule::CeilSqrtN,
            a: 1.0,
            stretch: 1.2,
            trials: 10,
            group_size: 5,
            master_seed: 11,
            offset_policy: OffsetPolicy::Minimize,
        }
    }

    #[test]
    fn rules() {
        assert_eq!(RateRule::N.rate(25), 25.0);
        assert_eq!(RateRule::SqrtN.rate(25), 5.0);
        assert_eq!(RateRule::Fixed(3.5).rate(25), 3.5);
        assert_eq!(CapacityRule::One.capacity(10), 1);
        assert_eq!(CapacityRule::CeilSqrtN.capacity(10), 4);
        assert_eq!(CapacityRule::CeilSqrtN.capacity(2500), 50);
        assert_eq!(CapacityRule::N.capacity(10), 10);
        assert_eq!(CapacityRule::Fixed(3).capacity(10), 3);
        assert_eq!(grid_side(2500), Some(50));
        assert_eq!(grid_side(2501), None);
        assert_eq!(grid_side(1), Some(1));
    }

    #[test]
    fn spec_validation() {
        let mut spec = small_spec(Geometry::Plane);
        assert!(spec.validate().is_ok());
        spec.n_values = vec![10];
        assert!(spec.validate().is_err());
        let mut spec = small_spec(Geometry::Line);
        spec.trials = 7;
        assert!(spec.validate().is_err());
        spec.trials = 10;
        spec.a = 0.5;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn group_mean_examples() {
        assert_eq!(
            group_means(&[1.0, 2.0, 3.0, 4.0], 2).unwrap(),
            vec![1.5, 3.5]
        );
        assert_eq!(group_means(&[1.0, 2.0, 3.0, 6.0], 4).unwrap(), vec![3.0]);
        assert!(group_means(&[1.0, 2.0, 3.0], 2).is_err());
        assert!(group_means(&[1.0], 0).is_err());
    }

    #[test]
    fn fit_examples() {
        let f = fit_power_law(&[(10.0, 10.0), (100.0, 100.0)]).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12 && (f.constant - 1.0).abs() < 1e-12);

        let pts: Vec<(f64, f64)> = [100.0, 400.0, 900.0]
            .iter()
            .map(|&n: &f64| (n, 5.0 * n.sqrt()))
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-9 && (f.constant - 5.0).abs() < 1e-9);

        let e = std::f64::consts::E;
        let f = fit_power_law(&[(1.0, 3.0), (e, 3.0 * e.powf(1.7))]).unwrap();
        assert!((f.exponent - 1.7).abs() < 1e-12);

        let f = fit_power_law(&[(2.0, 4.0), (8.0, 4.0), (32.0, 4.0)]).unwrap();
        assert!(f.exponent.abs() < 1e-12);

        assert!(matches!(
            fit_power_law(&[(5.0, 1.0)]),
            Err(Error::FitUnavailable(_))
        ));
        assert!(fit_power_law(&[(5.0, 1.0), (5.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(5.0, 1.0), (6.0, 0.0)]).is_err());
    }

    #[test]
    fn single_size_sweep_has_no_fit() {
        let mut spec = small_spec(Geometry::Line);
        spec.n_values = vec![25];
        let series = sweep(&spec).unwrap();
        assert_eq!(series.points.len(), 2);
        assert!(series.fit.is_none());
        assert!(series.fit_exponent().is_none());
    }

    #[test]
    fn trials_are_deterministic_and_order_independent() {
        for geometry in [Geometry::Line, Geometry::Plane] {
            let spec = small_spec(geometry);
            let a = run_trials(&spec, 36).unwrap();
            let b = run_trials(&spec, 36).unwrap();
            let c = run_trials_serial(&spec, 36).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
            assert_eq!(a.len(), 10);
        }
    }

    #[test]
    fn records_satisfy_bounds_and_validity() {
        for geometry in [Geometry::Line, Geometry::Plane] {
            let spec = small_spec(geometry);
            for n in [16, 36] {
                for r in run_trials(&spec, n).unwrap() {
                    assert!(r.bound_lower <= r.robot_cost, "{r:?}");
                    assert!(r.robot_cost <= r.bound_upper + 1e-6, "{r:?}");
                    assert!(r.valid_coverage && r.valid_interference, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn group_means_average_to_global_mean() {
        let spec = small_spec(Geometry::Line);
        let records = run_trials(&spec, 36).unwrap();
        let costs: Vec<f64> = records.iter().map(|r| r.robot_cost).collect();
        let global = costs.iter().sum::<f64>() / costs.len() as f64;
        let groups = group_means(&costs, 5).unwrap();
        let of_groups = groups.iter().sum::<f64>() / groups.len() as f64;
        assert!((global - of_groups).abs() < 1e-12);
        assert_eq!(group_means(&groups, groups.len()).unwrap()[0], of_groups);
    }

    #[test]
    fn invalid_stretch_aborts() {
        let mut spec = small_spec(Geometry::Line);
        spec.stretch = f64::NAN;
        assert!(run_trials(&spec, 16).is_err());
    }

    #[test]
    fn reference_curves() {
        let fig3 = reference_curve(FigureId::Fig3);
        assert!((fig3.value(2500.0).unwrap() - 53.19).abs() < 0.01);
        // Γ(5/2) = 3√π/4
        let closed = 2f64.sqrt() / (3.0 * std::f64::consts::PI.sqrt() / 4.0);
        assert!((fig3_constant() - closed).abs() < 1e-12);
        assert!((reference_curve(FigureId::Fig5).value(2500.0).unwrap() - 500.0).abs() < 1e-9);
        assert_eq!(reference_curve(FigureId::Fig10).exponent, 0.5);
        assert_eq!(reference_curve(FigureId::Fig9).exponent, 1.0);
        assert!(reference_curve(FigureId::Fig4).value(10.0).is_none());
    }

    #[test]
    fn presets_validate_and_parse() {
        for fig in FigureId::ALL {
            fig.preset().validate().unwrap();
            assert_eq!(fig.name().parse::<FigureId>().unwrap(), fig);
        }
        assert!("fig11".parse::<FigureId>().is_err());
        let fig3 = FigureId::Fig3.preset();
        assert_eq!((fig3.trials, fig3.group_size), (100, 5));
        assert_eq!(*fig3.n_values.last().unwrap(), 55 * 55);
    }
}
