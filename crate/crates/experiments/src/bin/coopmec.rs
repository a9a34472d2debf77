//! `coopmec`: solve, sweep and cross-check cooperative MEC scenarios.
//!
//! Exit status: 0 on success, 1 for bad input (config, flags, IO), 2 when
//! the joint solver failed to converge on any point.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use coopmec_core::dual::{solve_joint_with, SolveStatus};
use coopmec_core::oracle::GridSpec;
use coopmec_experiments::sweep::{num, solve_config};
use coopmec_experiments::tables::{write_feasibility_csv, write_oracle_csv};
use coopmec_experiments::{feasibility_table, oracle_table, run_sweep, write_csv, ExperimentConfig};

#[derive(Parser)]
#[command(name = "coopmec", version, about = "Minimum-energy joint computation and communication cooperation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; defaults to the config's `run.output`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative stopping tolerance of the ellipsoid method.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print the schedule.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Sweep-variable value to solve at; defaults to the sweep start.
        #[arg(long)]
        value: Option<f64>,
    },
    /// Run every sweep point and write CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated schemes, overriding the config.
        #[arg(long, value_delimiter = ',')]
        scheme: Option<Vec<String>>,
    },
    /// Maximum supportable task size at each sweep point.
    Feasibility {
        #[command(flatten)]
        common: Common,
    },
    /// Compare the joint solver with the brute-force oracle.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        /// `tau1,tau2,tau3,bits,p2,refinements` grid resolution.
        #[arg(long)]
        grid: Option<String>,
    },
}

fn load(common: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(tol) = common.tolerance {
        config.run.tolerance = Some(tol);
    }
    config.validate()?;
    Ok(config)
}

fn parse_grid(spec: &str) -> anyhow::Result<GridSpec> {
    let n: Vec<usize> = spec
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad grid {spec:?}"))?;
    let [tau1_points, tau2_points, tau3_points, bit_points, p2_points, refinements] = n[..] else {
        bail!("grid needs six comma-separated counts, got {spec:?}");
    };
    let grid = GridSpec { tau1_points, tau2_points, tau3_points, bit_points, p2_points, refinements };
    grid.validate()?;
    Ok(grid)
}

fn output(common: &Common, config: &ExperimentConfig) -> anyhow::Result<Box<dyn Write>> {
    Ok(match common.out.as_deref().or(config.run.output.as_deref()) {
        Some(path) => Box::new(BufWriter::new(create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn create(path: &Path) -> anyhow::Result<File> {
    File::create(path).with_context(|| format!("cannot write {}", path.display()))
}

/// `Ok(true)` when every point converged.
fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Solve { common, value } => {
            let config = load(&common)?;
            let value = value.unwrap_or(config.sweep.start);
            let s = config.build_scenario(value)?;
            let r = solve_joint_with(&s, &solve_config(&config))?;
            let a = &r.allocation;
            let fields = [
                ("tau1_s", a.tau1_s),
                ("tau2_s", a.tau2_s),
                ("tau3_s", a.tau3_s),
                ("p1_w", a.p1_w),
                ("p2_w", a.p2_w),
                ("p3_w", a.p3_w),
                ("bits_local", a.bits_local),
                ("bits_helper", a.bits_helper),
                ("bits_ap", a.bits_ap),
                ("energy_j", r.energy.e_total_j),
                ("dual_value_j", r.dual_value),
                ("duality_gap_j", r.duality_gap),
                ("max_bits", r.max_bits),
            ];
            let mut out = output(&common, &config)?;
            writeln!(out, "status,{}", r.status.as_str())?;
            writeln!(out, "{},{}", config.sweep.variable.column(), num(value))?;
            for (name, v) in fields {
                writeln!(out, "{name},{}", num(v))?;
            }
            writeln!(out, "iterations,{}", r.iterations)?;
            out.flush()?;
            Ok(r.status != SolveStatus::NotConverged)
        }
        Command::Sweep { common, scheme } => {
            let mut config = load(&common)?;
            if let Some(list) = scheme {
                config.run.schemes = list.into_iter().filter(|s| !s.trim().is_empty()).collect();
                config.validate()?;
            }
            let rows = run_sweep(&config)?;
            write_csv(&config, &rows, output(&common, &config)?)?;
            Ok(rows.iter().all(|r| r.converged()))
        }
        Command::Feasibility { common } => {
            let config = load(&common)?;
            let rows = feasibility_table(&config)?;
            write_feasibility_csv(&config, &rows, output(&common, &config)?)?;
            Ok(true)
        }
        Command::OracleCheck { common, grid } => {
            let config = load(&common)?;
            let grid = match grid {
                Some(spec) => parse_grid(&spec)?,
                None => GridSpec::default(),
            };
            let rows = oracle_table(&config, &grid)?;
            write_oracle_csv(&config, &rows, output(&common, &config)?)?;
            Ok(rows.iter().all(|r| r.status != SolveStatus::NotConverged))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("coopmec: the joint solver did not converge on every point");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("coopmec: {e:#}");
            ExitCode::from(1)
        }
    }
}
