//! Randomized bound-oracle suites. Each instance draws from its own seed so
//! a violation can be replayed from the printed seed alone.

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sensor_relocation::line_transport::{best_over_offsets, greedy_procedure, lemma1_bound};
use sensor_relocation::plane_transport::best_over_offsets_plane;
use sensor_relocation::stochastic::{
    derive_seed, sample_grid, sample_poisson_arrivals, Deployment1D, GridDeployment2D,
};
use sensor_relocation::targets::{line_targets, plane_targets, TargetPlan1D, TargetPlan2D};
use sensor_relocation::Result;

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2021)]
    pub seed: u64,
    /// Single-round instances.
    #[arg(long = "round-instances", default_value_t = 100_000)]
    pub round_instances: usize,
    /// Line instances, n <= 200.
    #[arg(long = "line-instances", default_value_t = 10_000)]
    pub line_instances: usize,
    /// Plane instances, m <= 20.
    #[arg(long = "plane-instances", default_value_t = 1_000)]
    pub plane_instances: usize,
    /// Multiplies every bound before comparing; values below 1 inject a fault.
    #[arg(long = "bound-scale", default_value_t = 1.0)]
    pub bound_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub violations: Vec<Violation>,
    /// Largest `value / bound` seen.
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub seed: u64,
    pub detail: String,
    pub value: f64,
    pub bound: f64,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            instances: 0,
            violations: Vec::new(),
            max_ratio: 0.0,
        }
    }

    fn record(
        &mut self,
        seed: u64,
        value: f64,
        bound: f64,
        tolerance: f64,
        detail: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        if bound > 0.0 {
            self.max_ratio = self.max_ratio.max(value / bound);
        }
        if value > bound + tolerance {
            self.violations.push(Violation {
                seed,
                detail: detail(),
                value,
                bound,
            });
        }
    }
}

const ROUND_SUITE: u64 = 1;
const LINE_SUITE: u64 = 2;
const PLANE_SUITE: u64 = 3;

fn sorted_from<R: Rng>(rng: &mut R, n: usize, start: f64) -> Vec<f64> {
    let rate = rng.random_range(0.5..20.0);
    let mut at = start;
    (0..n)
        .map(|_| {
            at += -(1.0 - rng.random::<f64>()).ln() / rate;
            at
        })
        .collect()
}

/// Arbitrary sorted deposits on `[0, span · c]`, moving sensors both ways.
fn deposits<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<f64> {
    let hi = span * rng.random_range(0.2..2.0) + 0.1;
    let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..hi)).collect();
    t.sort_by(f64::total_cmp);
    t
}

pub fn round_suite(master: u64, count: usize, scale: f64) -> SuiteReport {
    let mut report = SuiteReport::new("single-round");
    for i in 0..count {
        let seed = derive_seed(master, ROUND_SUITE, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = rng.random_range(1..=20);
        let y0 = rng.random_range(0.0..5.0);
        let sensors = sorted_from(&mut rng, l, y0);
        let drops = deposits(&mut rng, l, sensors[l - 1]);
        let distance = greedy_procedure(y0, &sensors, &drops)
            .expect("generated round is well formed")
            .total_distance();
        let bound = lemma1_bound(
            drops[0] - sensors[0],
            drops[l - 1] - sensors[l - 1],
            sensors[l - 1] - y0,
        )
        .expect("span is non-negative");
        report.record(seed, distance, scale * bound, 1e-9, || {
            format!("l={l} y0={y0}")
        });
    }
    report
}

fn line_instance(rng: &mut ChaCha8Rng, n: usize) -> Result<(Deployment1D, TargetPlan1D)> {
    let rate = rng.random_range(0.5..(2.0 * n as f64));
    let dep = sample_poisson_arrivals(n, rate, rng.random())?;
    let plan = if rng.random_bool(0.5) {
        let stretch = rng.random_range(1.0..1.5);
        line_targets(&dep, 1.0 / (2.0 * rate), stretch / rate, stretch)?
    } else {
        let t = deposits(rng, n, dep.last());
        TargetPlan1D::new(dep.positions(), t, 1.0, 0.0)?
    };
    Ok((dep, plan))
}

pub fn line_suite(master: u64, count: usize, scale: f64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("line");
    for i in 0..count {
        let seed = derive_seed(master, LINE_SUITE, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = [1.0, 1.5, 2.0, 3.0][i % 4];
        let n = rng.random_range(1..=200);
        let k = rng.random_range(1..=n);
        let (dep, plan) = line_instance(&mut rng, n)?;
        let cost = best_over_offsets(&dep, &plan, k, a)?;
        let bound = scale * cost.theorem1_bound;
        report.record(seed, cost.min_cost, bound, 1e-12 * bound, || {
            format!("n={n} k={k} a={a}")
        });
    }
    Ok(report)
}

fn plane_plan(
    rng: &mut ChaCha8Rng,
    m: usize,
    rate: f64,
    seed: u64,
) -> Result<(GridDeployment2D, TargetPlan2D)> {
    let grid = sample_grid(m, rate, seed)?;
    let plan = if rng.random_bool(0.5) {
        let stretch = rng.random_range(1.0..1.5);
        plane_targets(&grid, 1.0 / (2.0 * rate), stretch / rate, stretch)?
    } else {
        let tx = deposits(rng, m, grid.xs().last());
        let ty = deposits(rng, m, grid.ys().last());
        TargetPlan2D::from_axes(
            TargetPlan1D::new(grid.xs().positions(), tx, 1.0, 0.0)?,
            TargetPlan1D::new(grid.ys().positions(), ty, 1.0, 0.0)?,
            1.0,
        )?
    };
    Ok((grid, plan))
}

pub fn plane_suite(master: u64, count: usize, scale: f64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("plane");
    for i in 0..count {
        let seed = derive_seed(master, PLANE_SUITE, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = [1.0, 2.0][i % 2];
        let m = rng.random_range(1..=20);
        let k = rng.random_range(1..=m);
        let rate = rng.random_range(0.5..(2.0 * m as f64));
        let grid_seed = rng.random();
        let (grid, plan) = plane_plan(&mut rng, m, rate, grid_seed)?;
        let cost = best_over_offsets_plane(&grid, &plan, k, a)?;
        let bound = scale * cost.theorem2_bound;
        report.record(seed, cost.min_cost, bound, 1e-12 * bound, || {
            format!("m={m} k={k} a={a}")
        });
    }
    Ok(report)
}

/// Runs every suite, prints one summary line each plus any violations, and
/// returns whether all passed.
pub fn run(args: &VerifyArgs) -> Result<bool> {
    let reports = [
        round_suite(args.seed, args.round_instances, args.bound_scale),
        line_suite(args.seed, args.line_instances, args.bound_scale)?,
        plane_suite(args.seed, args.plane_instances, args.bound_scale)?,
    ];
    let mut clean = true;
    for r in &reports {
        println!(
            "{}: {} instances, {} violations, max value/bound {:.6}",
            r.name,
            r.instances,
            r.violations.len(),
            r.max_ratio
        );
        for v in r.violations.iter().take(5) {
            println!(
                "  violation seed={} {} value={} bound={}",
                v.seed, v.detail, v.value, v.bound
            );
        }
        clean &= r.violations.is_empty();
    }
    Ok(clean)
}
