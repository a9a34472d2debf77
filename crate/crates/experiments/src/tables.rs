//! Auxiliary tables: supportable task size and dual-vs-oracle agreement.

use std::io::Write;

use coopmec_core::dual::{solve_joint_with, SolveStatus};
use coopmec_core::lp::max_supportable_bits;
use coopmec_core::oracle::{brute_force_min_energy, GridSpec};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::sweep::{num, solve_config};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityRow {
    pub value: f64,
    pub task_bits: f64,
    pub max_bits: f64,
}

impl FeasibilityRow {
    pub fn feasible(&self) -> bool {
        self.task_bits <= self.max_bits
    }
}

pub fn feasibility_table(config: &ExperimentConfig) -> anyhow::Result<Vec<FeasibilityRow>> {
    config.validate()?;
    config
        .sweep_values()
        .into_par_iter()
        .map(|value| {
            let s = config.build_scenario(value)?;
            let max_bits = max_supportable_bits(&s)?.max_bits;
            Ok(FeasibilityRow { value, task_bits: s.task_bits, max_bits })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub value: f64,
    pub status: SolveStatus,
    pub joint_j: f64,
    pub dual_j: f64,
    /// `None` when no grid point was feasible.
    pub oracle_j: Option<f64>,
}

impl OracleRow {
    pub fn relative_difference(&self) -> Option<f64> {
        self.oracle_j.map(|o| (self.joint_j - o).abs() / o.abs().max(f64::MIN_POSITIVE))
    }
}

pub fn oracle_table(config: &ExperimentConfig, grid: &GridSpec) -> anyhow::Result<Vec<OracleRow>> {
    config.validate()?;
    grid.validate()?;
    let solve = solve_config(config);
    config
        .sweep_values()
        .into_par_iter()
        .map(|value| {
            let s = config.build_scenario(value)?;
            let joint = solve_joint_with(&s, &solve)?;
            let oracle = if joint.status == SolveStatus::InfeasibleTask {
                None
            } else {
                brute_force_min_energy(&s, grid)?.map(|o| o.energy_j)
            };
            Ok(OracleRow {
                value,
                status: joint.status,
                joint_j: joint.energy.e_total_j,
                dual_j: joint.dual_value,
                oracle_j: oracle,
            })
        })
        .collect()
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

pub fn write_feasibility_csv<W: Write>(config: &ExperimentConfig, rows: &[FeasibilityRow], out: W) -> anyhow::Result<()> {
    let mut w = writer(out);
    w.write_record([config.sweep.variable.column(), "task_bits", "max_bits", "feasible"])?;
    for r in rows {
        w.write_record([num(r.value), num(r.task_bits), num(r.max_bits), r.feasible().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_oracle_csv<W: Write>(config: &ExperimentConfig, rows: &[OracleRow], out: W) -> anyhow::Result<()> {
    let mut w = writer(out);
    w.write_record([config.sweep.variable.column(), "joint_status", "joint_j", "dual_j", "oracle_j", "relative_difference"])?;
    let opt = |v: Option<f64>| v.map_or_else(|| "infeasible".to_string(), num);
    for r in rows {
        w.write_record([
            num(r.value),
            r.status.as_str().to_string(),
            num(r.joint_j),
            num(r.dual_j),
            opt(r.oracle_j),
            opt(r.relative_difference()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
