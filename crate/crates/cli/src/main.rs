mod config;
mod output;
mod trace;
mod verify;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{geometry_name, resolve, Format, RunArgs, RunConfig};
use sensor_relocation::experiments::{sweep, Geometry};

/// Monte Carlo experiments for robot-assisted sensor relocation.
#[derive(Parser, Debug)]
#[command(name = "sensor-relocation", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep sensor counts on the line.
    LineRun(RunArgs),
    /// Sweep sensor counts on the plane grid.
    PlaneRun(RunArgs),
    /// Sweep with the geometry taken from the preset or config (line by default).
    Sweep(RunArgs),
    /// Reproduce a figure preset; writes CSV and SVG by default.
    Figure(RunArgs),
    /// Check the per-instance upper bounds on random instances.
    VerifyBounds(verify::VerifyArgs),
    /// Dump the robot's legs for one seeded instance.
    Trace(trace::TraceArgs),
}

fn write_outputs(run: &RunConfig) -> Result<()> {
    let series = sweep(&run.spec)?;
    std::fs::create_dir_all(&run.out).with_context(|| format!("creating {}", run.out.display()))?;
    for format in &run.formats {
        let (ext, body) = match format {
            Format::Csv => ("csv", output::csv(&series, run.figure)),
            Format::Json => ("json", output::json(&series, run.figure)),
            Format::Svg => ("svg", output::svg(&series, run.figure)),
        };
        let path = run.out.join(format!("{}.{ext}", run.stem()));
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    match series.fit {
        Some(fit) => println!(
            "{} sweep over {:?}: fitted exponent {:.4}, constant {:.4}",
            geometry_name(run.spec.geometry),
            run.spec.n_values,
            fit.exponent,
            fit.constant
        ),
        None => println!(
            "{} sweep over {:?}: too few sizes to fit",
            geometry_name(run.spec.geometry),
            run.spec.n_values
        ),
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::LineRun(args) => {
            write_outputs(&resolve(&args, Some(Geometry::Line), &[Format::Csv])?)?
        }
        Command::PlaneRun(args) => {
            write_outputs(&resolve(&args, Some(Geometry::Plane), &[Format::Csv])?)?
        }
        Command::Sweep(args) => write_outputs(&resolve(&args, None, &[Format::Csv])?)?,
        Command::Figure(args) => {
            anyhow::ensure!(
                args.figure.is_some() || args.config.is_some(),
                "figure needs --figure fig3..fig10"
            );
            let run = resolve(&args, None, &[Format::Csv, Format::Svg])?;
            anyhow::ensure!(run.figure.is_some(), "figure needs --figure fig3..fig10");
            write_outputs(&run)?
        }
        Command::VerifyBounds(args) => return Ok(verify::run(&args)?),
        Command::Trace(args) => {
            for path in trace::run(&args)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
