//! Benchmark schemes the joint scheme is compared against.
//!
//! Each benchmark solves its own restricted problem to optimality by nested
//! one-dimensional convex searches, so the comparison is against the best
//! the restricted scheme can do and not a heuristic.

use crate::dual::{solve_joint_with, SolveConfig, SolveStatus};
use crate::model::{total_energy, Allocation, Link, Scenario};
use crate::relay::cheapest_relay;
use crate::search::scan_then_golden;
use crate::Result;

const SCAN: usize = 24;
const GOLDEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Local,
    ComputationCoop,
    CommunicationCoop,
    Joint,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] =
        [SchemeId::Local, SchemeId::ComputationCoop, SchemeId::CommunicationCoop, SchemeId::Joint];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Local => "local",
            SchemeId::ComputationCoop => "computation_coop",
            SchemeId::CommunicationCoop => "communication_coop",
            SchemeId::Joint => "joint",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        SchemeId::ALL.into_iter().find(|id| id.as_str() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResult {
    pub scheme: SchemeId,
    /// `f64::INFINITY` when infeasible.
    pub energy_j: f64,
    pub allocation: Allocation,
    pub feasible: bool,
}

impl SchemeResult {
    fn infeasible(scheme: SchemeId) -> Self {
        SchemeResult { scheme, energy_j: f64::INFINITY, allocation: Allocation::default(), feasible: false }
    }

    fn from_allocation(scheme: SchemeId, allocation: Allocation, s: &Scenario) -> Result<Self> {
        let energy_j = total_energy(&allocation, s)?.e_total_j;
        Ok(SchemeResult { scheme, energy_j, allocation, feasible: true })
    }
}

/// Everything computed on the user's own CPU over the whole block.
pub fn local_only(scenario: &Scenario) -> Result<SchemeResult> {
    scenario.validate()?;
    if scenario.task_bits > scenario.local_bit_cap() {
        return Ok(SchemeResult::infeasible(SchemeId::Local));
    }
    SchemeResult::from_allocation(SchemeId::Local, Allocation::local_only(scenario.task_bits), scenario)
}

/// Cheapest `(tau1, P1)` for handing `bits` to the helper, plus the helper's
/// compute energy. Infinite when impossible.
fn helper_offload(s: &Scenario, bits: f64) -> (f64, f64) {
    if bits <= 0.0 {
        return (0.0, 0.0);
    }
    let t = s.block_length_s;
    let lo = bits / s.rate(Link::UserHelper, s.p_user_max_w);
    let hi = t - bits / s.helper_bit_rate_cap();
    if !(lo <= hi) {
        return (f64::INFINITY, 0.0);
    }
    let cost = |tau1: f64| {
        if tau1 <= 0.0 || tau1 >= t {
            return f64::INFINITY;
        }
        let p1 = s.power_for(Link::UserHelper, bits, tau1).min(s.p_user_max_w);
        tau1 * p1 + s.helper_energy(bits, t - tau1)
    };
    let (tau1, e) = scan_then_golden(cost, lo, hi, SCAN, GOLDEN);
    (e, tau1)
}

/// Local computing plus offloading to the helper for remote computing; no
/// AP involvement.
pub fn computation_coop(scenario: &Scenario) -> Result<SchemeResult> {
    scenario.validate()?;
    let s = scenario;
    let t = s.block_length_s;
    let total = s.task_bits;
    // helper bits need tau1 = l/r01max and T - tau1 >= c_h l / f_h
    let helper_max = t / (1.0 / s.rate(Link::UserHelper, s.p_user_max_w) + 1.0 / s.helper_bit_rate_cap());
    let lo = (total - s.local_bit_cap()).max(0.0);
    let hi = total.min(helper_max);
    if lo > hi {
        return Ok(SchemeResult::infeasible(SchemeId::ComputationCoop));
    }
    let cost = |lh: f64| {
        let lu = total - lh;
        if lu > s.local_bit_cap() {
            return f64::INFINITY;
        }
        s.local_energy(lu.max(0.0)) + helper_offload(s, lh).0
    };
    let (lh, e) = scan_then_golden(cost, lo, hi, SCAN, GOLDEN);
    if !e.is_finite() {
        return Ok(SchemeResult::infeasible(SchemeId::ComputationCoop));
    }
    let tau1 = helper_offload(s, lh).1;
    let allocation = Allocation {
        tau1_s: tau1,
        p1_w: if lh > 0.0 { s.power_for(Link::UserHelper, lh, tau1) } else { 0.0 },
        bits_local: total - lh,
        bits_helper: lh,
        ..Allocation::default()
    };
    SchemeResult::from_allocation(SchemeId::ComputationCoop, allocation, s)
}

/// How much of the block the relay slots of the communication benchmark may
/// use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelayBudget {
    /// `tau2 + tau3 + l_a / f_a <= T`, the time budget of the full problem.
    #[default]
    LeaveApComputeTime,
    /// `tau2 + tau3 = T`, ignoring the AP's computing time. Schedules found
    /// this way can overrun the block and are reported as they are.
    WholeBlock,
}

/// Local computing plus relayed offloading to the AP; the helper only
/// forwards.
pub fn communication_coop(scenario: &Scenario) -> Result<SchemeResult> {
    communication_coop_with(scenario, RelayBudget::default())
}

pub fn communication_coop_with(scenario: &Scenario, budget: RelayBudget) -> Result<SchemeResult> {
    scenario.validate()?;
    let s = scenario;
    let t = s.block_length_s;
    let total = s.task_bits;
    let window = |la: f64| match budget {
        RelayBudget::LeaveApComputeTime => t - la / s.f_ap_max_hz,
        RelayBudget::WholeBlock => t,
    };
    // longer slots never cost more, so the relay pair fills its window
    let relay = |la: f64| -> (f64, f64) {
        let w = window(la);
        if la <= 0.0 {
            return (0.0, 0.0);
        }
        if !(w > 0.0) {
            return (f64::INFINITY, 0.0);
        }
        let cost = |tau2: f64| cheapest_relay(s, tau2, w - tau2, la, GOLDEN).map_or(f64::INFINITY, |p| p.energy_j);
        let (tau2, e) = scan_then_golden(cost, 0.0, w, SCAN, GOLDEN);
        (e, tau2)
    };
    let lo = (total - s.local_bit_cap()).max(0.0);
    let cost = |la: f64| s.local_energy(total - la) + relay(la).0;
    let (la, e) = scan_then_golden(cost, lo, total, SCAN, GOLDEN);
    if !e.is_finite() {
        return Ok(SchemeResult::infeasible(SchemeId::CommunicationCoop));
    }
    let (_, tau2) = relay(la);
    let tau3 = window(la) - tau2;
    let allocation = match (la > 0.0).then(|| cheapest_relay(s, tau2, tau3, la, GOLDEN)).flatten() {
        Some(plan) => Allocation {
            tau2_s: tau2,
            tau3_s: if plan.p3_w > 0.0 { tau3 } else { 0.0 },
            p2_w: plan.p2_w,
            p3_w: plan.p3_w,
            bits_local: total - la,
            bits_ap: la,
            ..Allocation::default()
        },
        None => Allocation::local_only(total),
    };
    SchemeResult::from_allocation(SchemeId::CommunicationCoop, allocation, s)
}

/// The joint scheme through the dual solver.
pub fn joint(scenario: &Scenario, config: &SolveConfig) -> Result<SchemeResult> {
    let report = solve_joint_with(scenario, config)?;
    Ok(match report.status {
        SolveStatus::InfeasibleTask => SchemeResult::infeasible(SchemeId::Joint),
        SolveStatus::Optimal | SolveStatus::NotConverged => SchemeResult {
            scheme: SchemeId::Joint,
            energy_j: report.energy.e_total_j,
            allocation: report.allocation,
            feasible: report.status == SolveStatus::Optimal,
        },
    })
}

/// Dispatches on `id` with default settings.
pub fn run_scheme(id: SchemeId, scenario: &Scenario) -> Result<SchemeResult> {
    match id {
        SchemeId::Local => local_only(scenario),
        SchemeId::ComputationCoop => computation_coop(scenario),
        SchemeId::CommunicationCoop => communication_coop(scenario),
        SchemeId::Joint => joint(scenario, &SolveConfig::default()),
    }
}
