//! Resolves a run from, in increasing priority: built-in defaults or a
//! figure preset, a flat TOML config file, and command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;

use sensor_relocation::experiments::{
    CapacityRule, ExperimentSpec, FigureId, Geometry, OffsetPolicy, RateRule,
};

pub const OUT_DIR_ENV: &str = "SENSOR_RELOCATION_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => bail!("unknown format '{other}' (expected csv, json or svg)"),
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Flat TOML file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Start from a figure preset (fig3..fig10).
    #[arg(long)]
    pub figure: Option<String>,
    /// Sensor counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Robot capacity: one, sqrt, n, or an integer.
    #[arg(long = "k-rule", alias = "k")]
    pub k_rule: Option<String>,
    /// Deployment rate: n, sqrt-n, or a number.
    #[arg(long = "rate-rule", alias = "rate")]
    pub rate_rule: Option<String>,
    /// Cost exponent.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub stretch: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long = "group-size")]
    pub group_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Offset choice: zero, or min to take the best offset per trial.
    #[arg(long)]
    pub offset: Option<String>,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated: csv, json, svg.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    figure: Option<String>,
    geometry: Option<String>,
    n: Option<Vec<usize>>,
    k_rule: Option<String>,
    rate_rule: Option<String>,
    a: Option<f64>,
    stretch: Option<f64>,
    trials: Option<usize>,
    group_size: Option<usize>,
    seed: Option<u64>,
    offset: Option<String>,
    out: Option<PathBuf>,
    format: Option<Vec<String>>,
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

pub fn parse_capacity(s: &str) -> Result<CapacityRule> {
    Ok(match s.trim().to_ascii_lowercase().as_str() {
        "one" | "1" => CapacityRule::One,
        "sqrt" | "sqrt-n" | "ceil-sqrt-n" => CapacityRule::CeilSqrtN,
        "n" => CapacityRule::N,
        other => CapacityRule::Fixed(
            other
                .parse()
                .with_context(|| format!("bad capacity rule '{s}' (one, sqrt, n or an integer)"))?,
        ),
    })
}

pub fn parse_rate(s: &str) -> Result<RateRule> {
    Ok(match s.trim().to_ascii_lowercase().as_str() {
        "n" => RateRule::N,
        "sqrt" | "sqrt-n" => RateRule::SqrtN,
        other => RateRule::Fixed(
            other
                .parse()
                .with_context(|| format!("bad rate rule '{s}' (n, sqrt-n or a number)"))?,
        ),
    })
}

fn parse_offset(s: &str) -> Result<OffsetPolicy> {
    match s.trim().to_ascii_lowercase().as_str() {
        "zero" | "0" => Ok(OffsetPolicy::Zero),
        "min" | "minimize" => Ok(OffsetPolicy::Minimize),
        other => bail!("bad offset policy '{other}' (zero or min)"),
    }
}

fn parse_geometry(s: &str) -> Result<Geometry> {
    match s.trim().to_ascii_lowercase().as_str() {
        "line" => Ok(Geometry::Line),
        "plane" => Ok(Geometry::Plane),
        other => bail!("bad geometry '{other}' (line or plane)"),
    }
}

fn default_spec(geometry: Geometry) -> ExperimentSpec {
    ExperimentSpec {
        geometry,
        n_values: vec![100],
        rate_rule: match geometry {
            Geometry::Line => RateRule::N,
            Geometry::Plane => RateRule::SqrtN,
        },
        capacity_rule: CapacityRule::One,
        a: 1.0,
        stretch: 1.0,
        trials: 100,
        group_size: 5,
        master_seed: 2021,
        offset_policy: OffsetPolicy::Zero,
    }
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: ExperimentSpec,
    pub figure: Option<FigureId>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

impl RunConfig {
    /// File stem for every artifact of this run.
    pub fn stem(&self) -> String {
        match (self.figure, self.spec.geometry) {
            (Some(f), _) => f.name().to_string(),
            (None, Geometry::Line) => "line-sweep".to_string(),
            (None, Geometry::Plane) => "plane-sweep".to_string(),
        }
    }
}

/// `forced` pins the geometry (line-run / plane-run); `default_formats`
/// applies when neither flags nor file choose any.
pub fn resolve(
    args: &RunArgs,
    forced: Option<Geometry>,
    default_formats: &[Format],
) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let figure = args
        .figure
        .as_deref()
        .or(file.figure.as_deref())
        .map(|f| f.parse::<FigureId>())
        .transpose()?;
    let file_geometry = file.geometry.as_deref().map(parse_geometry).transpose()?;

    let mut spec = match figure {
        Some(f) => f.preset(),
        None => default_spec(forced.or(file_geometry).unwrap_or(Geometry::Line)),
    };
    if let Some(g) = forced.or(file_geometry) {
        if g != spec.geometry {
            bail!(
                "{} is a {} experiment",
                figure.map(|f| f.name()).unwrap_or("preset"),
                geometry_name(spec.geometry)
            );
        }
    }

    if let Some(n) = args.n.clone().or(file.n) {
        spec.n_values = n;
    }
    if let Some(k) = args.k_rule.as_deref().or(file.k_rule.as_deref()) {
        spec.capacity_rule = parse_capacity(k)?;
    }
    if let Some(r) = args.rate_rule.as_deref().or(file.rate_rule.as_deref()) {
        spec.rate_rule = parse_rate(r)?;
    }
    if let Some(a) = args.a.or(file.a) {
        spec.a = a;
    }
    if let Some(s) = args.stretch.or(file.stretch) {
        spec.stretch = s;
    }
    let trials = args.trials.or(file.trials);
    if let Some(t) = trials {
        spec.trials = t;
    }
    match args.group_size.or(file.group_size) {
        Some(g) => spec.group_size = g,
        // keep the default grouping when it still divides the trial count
        None if figure.is_none()
            && trials.is_some()
            && !spec.trials.is_multiple_of(spec.group_size) =>
        {
            spec.group_size = 1
        }
        None => {}
    }
    if let Some(seed) = args.seed.or(file.seed) {
        spec.master_seed = seed;
    }
    if let Some(o) = args.offset.as_deref().or(file.offset.as_deref()) {
        spec.offset_policy = parse_offset(o)?;
    }
    spec.validate()?;

    let formats = match (&args.format, &file.format) {
        (Some(f), _) => f.clone(),
        (None, Some(f)) => f.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        (None, None) => default_formats.to_vec(),
    };
    let out = args
        .out
        .clone()
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("."));

    Ok(RunConfig {
        spec,
        figure,
        out,
        formats,
    })
}

pub fn geometry_name(g: Geometry) -> &'static str {
    match g {
        Geometry::Line => "line",
        Geometry::Plane => "plane",
    }
}
