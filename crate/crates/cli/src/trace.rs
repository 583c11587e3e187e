//! Leg-by-leg JSON-lines dumps of single seeded instances.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::json;

use sensor_relocation::experiments::grid_side;
use sensor_relocation::line_transport::gm_offset_trajectory;
use sensor_relocation::plane_transport::gm_plane_trajectory;
use sensor_relocation::stochastic::{
    sample_grid, sample_poisson_arrivals, Deployment1D, GridDeployment2D,
};
use sensor_relocation::targets::{line_targets, plane_targets, TargetPlan1D, TargetPlan2D};

use crate::config::{geometry_name, OUT_DIR_ENV};
use sensor_relocation::experiments::Geometry;

#[derive(Args, Debug, Clone)]
pub struct TraceArgs {
    /// line or plane.
    #[arg(long, default_value = "line", value_parser = parse_geometry)]
    pub geometry: Geometry,
    /// Sensor count; a perfect square on the plane.
    #[arg(long)]
    pub n: usize,
    #[arg(long, alias = "k-rule")]
    pub k: usize,
    /// Offset to dump; every offset when omitted (line only).
    #[arg(long)]
    pub j: Option<usize>,
    /// Column offset on the plane.
    #[arg(long, default_value_t = 0)]
    pub j1: usize,
    /// Row offset on the plane.
    #[arg(long, default_value_t = 0)]
    pub j2: usize,
    #[arg(long, default_value_t = 2021)]
    pub seed: u64,
    /// Deployment rate; defaults to the sensor count per axis.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub stretch: f64,
    /// Use each sensor's own position as its target.
    #[arg(long = "zero-displacement")]
    pub zero_displacement: bool,
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    match s {
        "line" => Ok(Geometry::Line),
        "plane" => Ok(Geometry::Plane),
        other => Err(format!("bad geometry '{other}' (line or plane)")),
    }
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut body = lines.join("\n");
    body.push('\n');
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn line_plan(dep: &Deployment1D, args: &TraceArgs, rate: f64) -> Result<TargetPlan1D> {
    let r = 1.0 / (2.0 * rate);
    let s = args.stretch / rate;
    Ok(if args.zero_displacement {
        TargetPlan1D::new(
            dep.positions(),
            dep.positions().to_vec(),
            r * args.stretch,
            s,
        )?
    } else {
        line_targets(dep, r, s, args.stretch)?
    })
}

/// Writes one file per requested offset; returns the paths.
pub fn run(args: &TraceArgs) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    match args.geometry {
        Geometry::Line => trace_line(args),
        Geometry::Plane => trace_plane(args),
    }
}

fn trace_line(args: &TraceArgs) -> Result<Vec<PathBuf>> {
    let n = args.n;
    let rate = args.rate.unwrap_or(n as f64);
    let dep = sample_poisson_arrivals(n, rate, args.seed)?;
    let plan = line_plan(&dep, args, rate)?;
    let offsets: Vec<usize> = match args.j {
        Some(j) => vec![j],
        None => (0..args.k).collect(),
    };
    let mut paths = Vec::new();
    for j in offsets {
        let traj = gm_offset_trajectory(&dep, &plan, args.k, j)?;
        let mut lines = vec![json!({
            "record": "instance",
            "geometry": "line",
            "n": n,
            "k": args.k,
            "j": j,
            "seed": args.seed,
            "rate": rate,
            "positions": dep.positions(),
            "targets": plan.targets(),
        })
        .to_string()];
        lines.extend(traj.legs().iter().map(|leg| {
            json!({"record": "leg", "from": leg.from, "to": leg.to, "carried": leg.carried})
                .to_string()
        }));
        lines.push(
            json!({
                "record": "summary",
                "pickups": traj.pickups(),
                "drops": traj.drops(),
                "total_distance": traj.total_distance(),
                "end_position": traj.end_position(),
            })
            .to_string(),
        );
        let path = args
            .out
            .join(format!("trace-line-n{n}-k{}-j{j}.jsonl", args.k));
        write_lines(&path, &lines)?;
        paths.push(path);
    }
    Ok(paths)
}

fn plane_plan(grid: &GridDeployment2D, args: &TraceArgs, rate: f64) -> Result<TargetPlan2D> {
    if !args.zero_displacement {
        return Ok(plane_targets(
            grid,
            1.0 / (2.0 * rate),
            args.stretch / rate,
            args.stretch,
        )?);
    }
    let r = args.stretch / (2.0 * rate);
    let s = args.stretch / rate;
    let x = TargetPlan1D::new(grid.xs().positions(), grid.xs().positions().to_vec(), r, s)?;
    let y = TargetPlan1D::new(grid.ys().positions(), grid.ys().positions().to_vec(), r, s)?;
    Ok(TargetPlan2D::from_axes(x, y, r)?)
}

fn trace_plane(args: &TraceArgs) -> Result<Vec<PathBuf>> {
    let Some(m) = grid_side(args.n) else {
        bail!("{} sensors do not form a square grid", args.n);
    };
    if args.j.is_some() {
        bail!("use --j1 and --j2 for plane offsets");
    }
    let rate = args.rate.unwrap_or(m as f64);
    let grid = sample_grid(m, rate, args.seed)?;
    let plan = plane_plan(&grid, args, rate)?;
    let traj = gm_plane_trajectory(&grid, &plan, args.k, args.j1, args.j2)?;
    let mut lines = vec![json!({
        "record": "instance",
        "geometry": geometry_name(Geometry::Plane),
        "m": m,
        "k": args.k,
        "j1": args.j1,
        "j2": args.j2,
        "seed": args.seed,
        "rate": rate,
        "xs": grid.xs().positions(),
        "ys": grid.ys().positions(),
        "x_targets": plan.x_plan().targets(),
        "y_targets": plan.y_plan().targets(),
    })
    .to_string()];
    lines.extend(traj.legs().iter().map(|leg| {
        json!({
            "record": "leg",
            "from": leg.from,
            "to": leg.to,
            "carried": leg.carried,
            "phase": leg.phase,
            "kind": leg.kind,
        })
        .to_string()
    }));
    lines.push(
        json!({
            "record": "summary",
            "phases": traj.phase_breakdown(),
            "total_distance": traj.total_distance(),
            "final_positions": traj.final_positions(),
        })
        .to_string(),
    );
    let path = args.out.join(format!(
        "trace-plane-m{m}-k{}-j{}-{}.jsonl",
        args.k, args.j1, args.j2
    ));
    write_lines(&path, &lines)?;
    Ok(vec![path])
}
