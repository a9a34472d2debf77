//! Parameter sweeps and their CSV output.

use std::io::Write;

use coopmec_core::dual::{solve_joint_with, SolveConfig, SolveReport, SolveStatus};
use coopmec_core::schemes::{communication_coop_with, computation_coop, local_only, RelayBudget, SchemeId};
use coopmec_core::Scenario;
use rayon::prelude::*;

use crate::config::{ConfigError, ExperimentConfig};

/// Energy of one scheme at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Energy(f64),
    Infeasible,
    NotConverged,
}

impl Outcome {
    pub fn energy(self) -> Option<f64> {
        match self {
            Outcome::Energy(e) => Some(e),
            _ => None,
        }
    }

    fn cell(self) -> String {
        match self {
            Outcome::Energy(e) => num(e),
            Outcome::Infeasible => "infeasible".into(),
            Outcome::NotConverged => "not_converged".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// One entry per requested scheme, in canonical order.
    pub outcomes: Vec<(SchemeId, Outcome)>,
    /// The joint solution, reported whether or not `joint` was requested.
    pub joint: SolveReport,
}

impl SweepRow {
    pub fn outcome(&self, id: SchemeId) -> Option<Outcome> {
        self.outcomes.iter().find(|(s, _)| *s == id).map(|&(_, o)| o)
    }

    pub fn converged(&self) -> bool {
        self.joint.status != SolveStatus::NotConverged
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn solve_config(config: &ExperimentConfig) -> SolveConfig {
    let mut solve = SolveConfig::default();
    if let Some(tol) = config.run.tolerance {
        solve.ellipsoid.eps_rel = tol;
    }
    solve
}

fn joint_outcome(report: &SolveReport) -> Outcome {
    match report.status {
        SolveStatus::Optimal => Outcome::Energy(report.energy.e_total_j),
        SolveStatus::InfeasibleTask => Outcome::Infeasible,
        SolveStatus::NotConverged => Outcome::NotConverged,
    }
}

fn run_point(config: &ExperimentConfig, schemes: &[SchemeId], s: &Scenario, value: f64) -> anyhow::Result<SweepRow> {
    let joint = solve_joint_with(s, &solve_config(config))?;
    let budget = if config.run.relay_whole_block { RelayBudget::WholeBlock } else { RelayBudget::LeaveApComputeTime };
    let mut outcomes = Vec::with_capacity(schemes.len());
    for &id in schemes {
        let result = match id {
            SchemeId::Joint => {
                outcomes.push((id, joint_outcome(&joint)));
                continue;
            }
            SchemeId::Local => local_only(s)?,
            SchemeId::ComputationCoop => computation_coop(s)?,
            SchemeId::CommunicationCoop => communication_coop_with(s, budget)?,
        };
        let outcome = if result.feasible { Outcome::Energy(result.energy_j) } else { Outcome::Infeasible };
        outcomes.push((id, outcome));
    }
    Ok(SweepRow { value, outcomes, joint })
}

/// Runs every requested scheme and the joint solver at each sweep point.
///
/// Points run in parallel; rows come back in sweep order. An empty scheme
/// list yields no rows.
pub fn run_sweep(config: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    config.validate()?;
    let schemes = config.schemes()?;
    if schemes.is_empty() {
        return Ok(Vec::new());
    }
    let points: Vec<(f64, Scenario)> = config
        .sweep_values()
        .into_iter()
        .map(|v| config.build_scenario(v).map(|s| (v, s)))
        .collect::<Result<_, ConfigError>>()?;
    points.par_iter().map(|(v, s)| run_point(config, &schemes, s, *v)).collect()
}

/// Column names, fixed for a given scheme selection.
pub fn header(config: &ExperimentConfig) -> Result<Vec<String>, ConfigError> {
    let mut cols = vec![config.sweep.variable.column().to_string()];
    cols.extend(config.schemes()?.iter().map(|id| format!("{}_j", id.as_str())));
    cols.extend(
        [
            "joint_status",
            "tau1_s",
            "tau2_s",
            "tau3_s",
            "p1_w",
            "p2_w",
            "p3_w",
            "bits_local",
            "bits_helper",
            "bits_ap",
            "dual_value_j",
            "duality_gap_j",
        ]
        .map(String::from),
    );
    Ok(cols)
}

fn record(row: &SweepRow) -> Vec<String> {
    let a = &row.joint.allocation;
    let mut cells = vec![num(row.value)];
    cells.extend(row.outcomes.iter().map(|(_, o)| o.cell()));
    cells.push(row.joint.status.as_str().to_string());
    cells.extend(
        [a.tau1_s, a.tau2_s, a.tau3_s, a.p1_w, a.p2_w, a.p3_w, a.bits_local, a.bits_helper, a.bits_ap]
            .map(num),
    );
    cells.push(num(row.joint.dual_value));
    cells.push(num(row.joint.duality_gap));
    cells
}

/// Writes the sweep as CSV: header row, one row per point, LF endings.
pub fn write_csv<W: Write>(config: &ExperimentConfig, rows: &[SweepRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header(config)?)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}
