//! Final sensor layouts meeting (r, s)-coverage and interference.
//!
//! Targets are equi-spaced midpoints `(i - 1/2) · d` with spacing
//! `d = 2 · r · stretch`, so the effective sensing radius is `r · stretch`.
//! With `stretch = 1` this is the tight `r = 1/(2λ), s = 1/λ` layout; larger
//! stretch models the expanded regimes.

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Error, Result};
use crate::stochastic::{Deployment1D, GridDeployment2D};

/// Absolute slack applied to every coverage and spacing comparison.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetPlan1D {
    targets: Vec<f64>,
    displacements: Vec<f64>,
    sensing_radius: f64,
    interference_distance: f64,
}

impl TargetPlan1D {
    /// Builds a plan for arbitrary sorted targets, e.g. hand-written test layouts.
    pub fn new(
        positions: &[f64],
        targets: Vec<f64>,
        sensing_radius: f64,
        interference_distance: f64,
    ) -> Result<Self> {
        if targets.len() != positions.len() {
            return Err(contract(format!(
                "{} targets for {} sensors",
                targets.len(),
                positions.len()
            )));
        }
        if targets.windows(2).any(|w| w[0] > w[1]) {
            return Err(contract("targets must be sorted ascending"));
        }
        let displacements = targets.iter().zip(positions).map(|(t, p)| t - p).collect();
        Ok(Self {
            targets,
            displacements,
            sensing_radius,
            interference_distance,
        })
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Signed moves `targets[i] - positions[i]`.
    pub fn displacements(&self) -> &[f64] {
        &self.displacements
    }

    pub fn sensing_radius(&self) -> f64 {
        self.sensing_radius
    }

    pub fn interference_distance(&self) -> f64 {
        self.interference_distance
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Plane plan: sensor `(i1, i2)` ends at `(x_plan.targets[i1], y_plan.targets[i2])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetPlan2D {
    x_plan: TargetPlan1D,
    y_plan: TargetPlan1D,
    square_sensing_radius: f64,
}

impl TargetPlan2D {
    pub fn from_axes(
        x_plan: TargetPlan1D,
        y_plan: TargetPlan1D,
        square_sensing_radius: f64,
    ) -> Result<Self> {
        if x_plan.len() != y_plan.len() {
            return Err(contract("axis plans differ in length"));
        }
        Ok(Self {
            x_plan,
            y_plan,
            square_sensing_radius,
        })
    }

    pub fn x_plan(&self) -> &TargetPlan1D {
        &self.x_plan
    }

    pub fn y_plan(&self) -> &TargetPlan1D {
        &self.y_plan
    }

    pub fn square_sensing_radius(&self) -> f64 {
        self.square_sensing_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub coverage: bool,
    pub interference: bool,
    /// Distance from the origin to the first target (largest over axes on the plane).
    pub first_gap: f64,
    /// Smallest consecutive spacing; infinite with a single sensor per axis.
    pub min_spacing: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.coverage && self.interference
    }
}

fn anchor_targets(n: usize, r: f64, s: f64, stretch: f64) -> Result<Vec<f64>> {
    if !(r > 0.0) {
        return Err(invalid(format!("sensing radius must be positive, got {r}")));
    }
    if !(s > 0.0) {
        return Err(invalid(format!(
            "interference distance must be positive, got {s}"
        )));
    }
    if !(stretch >= 1.0) {
        return Err(invalid(format!(
            "stretch must be at least 1, got {stretch}"
        )));
    }
    let spacing = 2.0 * r * stretch;
    if spacing < s - VALIDATION_TOLERANCE {
        return Err(Error::InfeasiblePlan {
            spacing,
            interference: s,
        });
    }
    Ok((1..=n).map(|i| stretch * (2 * i - 1) as f64 * r).collect())
}

/// Anchor layout for a line deployment. The returned plan carries the
/// effective sensing radius `r · stretch`.
pub fn line_targets(
    deployment: &Deployment1D,
    r: f64,
    s: f64,
    stretch: f64,
) -> Result<TargetPlan1D> {
    let targets = anchor_targets(deployment.len(), r, s, stretch)?;
    TargetPlan1D::new(deployment.positions(), targets, r * stretch, s)
}

/// Checks coverage of `[0, last + r]` and pairwise spacing `>= s` for sorted targets.
pub fn validate_line_targets(targets: &[f64], r: f64, s: f64) -> ValidationReport {
    let first_gap = targets.first().copied().unwrap_or(0.0);
    let mut coverage = !targets.is_empty() && first_gap <= r + VALIDATION_TOLERANCE;
    let mut min_spacing = f64::INFINITY;
    for w in targets.windows(2) {
        let gap = w[1] - w[0];
        min_spacing = min_spacing.min(gap);
        if gap > 2.0 * r + VALIDATION_TOLERANCE {
            coverage = false;
        }
    }
    ValidationReport {
        coverage,
        interference: min_spacing >= s - VALIDATION_TOLERANCE,
        first_gap,
        min_spacing,
    }
}

pub fn validate_line_plan(plan: &TargetPlan1D) -> ValidationReport {
    validate_line_targets(
        plan.targets(),
        plan.sensing_radius(),
        plan.interference_distance(),
    )
}

/// Applies the line anchor construction to both grid axes with radius `r2`.
pub fn plane_targets(
    grid: &GridDeployment2D,
    r2: f64,
    s: f64,
    stretch: f64,
) -> Result<TargetPlan2D> {
    let x_plan = line_targets(grid.xs(), r2, s, stretch)?;
    let y_plan = line_targets(grid.ys(), r2, s, stretch)?;
    TargetPlan2D::from_axes(x_plan, y_plan, r2 * stretch)
}

/// Square sensing on a grid covers the rectangle iff each axis is covered,
/// and the closest pair of grid points is the smallest axis spacing.
pub fn validate_plane_targets(
    x_targets: &[f64],
    y_targets: &[f64],
    r2: f64,
    s: f64,
) -> ValidationReport {
    let x = validate_line_targets(x_targets, r2, s);
    let y = validate_line_targets(y_targets, r2, s);
    ValidationReport {
        coverage: x.coverage && y.coverage,
        interference: x.interference && y.interference,
        first_gap: x.first_gap.max(y.first_gap),
        min_spacing: x.min_spacing.min(y.min_spacing),
    }
}

pub fn validate_plane_plan(plan: &TargetPlan2D) -> ValidationReport {
    validate_plane_targets(
        plan.x_plan().targets(),
        plan.y_plan().targets(),
        plan.square_sensing_radius(),
        plan.x_plan().interference_distance(),
    )
}
