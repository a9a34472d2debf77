//! Lagrange-dual solution of the joint cooperation problem.
//!
//! With `E_i = tau_i P_i` the problem is convex. Dualizing the three offload
//! rate constraints (`lambda1..3`), the time budget (`mu1`) and the task
//! partition (`mu2`) splits the Lagrangian into five independent subproblems
//! with closed-form minimizers ([`lemmas`]). The concave dual function is
//! maximized by the ellipsoid method ([`ellipsoid`]) and the primal schedule
//! is rebuilt from the optimal multipliers by a small LP
//! ([`crate::lp::recover_primal`]).

use crate::lp::{max_supportable_bits, recover_primal};
use crate::model::{total_energy, validate_allocation, Allocation, EnergyBreakdown, Link, Scenario};
use crate::{Error, Result};

pub mod ellipsoid;
pub mod lemmas;

pub use ellipsoid::{ellipsoid_maximize, EllipsoidConfig, EllipsoidOutcome, EllipsoidTrace};
pub use lemmas::{
    solve_subproblem1, solve_subproblem2, solve_subproblem3, solve_subproblem4, solve_subproblem5, ApBits,
    HelperOffload, LocalBits, RelayBroadcast, RelayForward, SlotRule,
};

/// Number of multipliers.
pub const DIM: usize = 5;

/// Lagrange multipliers: `lambda1..3` for the helper link and the two relay
/// bounds, `mu1` for the time budget, `mu2` for the task partition.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualPoint {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub mu1: f64,
    /// Equality multiplier; any sign.
    pub mu2: f64,
}

impl DualPoint {
    pub fn from_array(v: [f64; DIM]) -> Self {
        DualPoint { lambda1: v[0], lambda2: v[1], lambda3: v[2], mu1: v[3], mu2: v[4] }
    }

    pub fn to_array(self) -> [f64; DIM] {
        [self.lambda1, self.lambda2, self.lambda3, self.mu1, self.mu2]
    }

    /// Whether the point lies in the dual-feasible set.
    pub fn is_feasible(&self) -> bool {
        self.lambda1 >= 0.0 && self.lambda2 >= 0.0 && self.lambda3 >= 0.0 && self.mu1 >= 0.0 && self.mu2.is_finite()
    }

    /// Multipliers for a scenario whose bits are counted in units of `unit`.
    /// Per-bit prices scale up; the time price is unchanged.
    pub fn to_scaled(self, unit: f64) -> Self {
        DualPoint {
            lambda1: self.lambda1 * unit,
            lambda2: self.lambda2 * unit,
            lambda3: self.lambda3 * unit,
            mu1: self.mu1,
            mu2: self.mu2 * unit,
        }
    }

    /// Inverse of [`DualPoint::to_scaled`].
    pub fn from_scaled(self, unit: f64) -> Self {
        self.to_scaled(1.0 / unit)
    }
}

/// Minimizers of all five subproblems at one dual point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubproblemSolution {
    pub helper: HelperOffload,
    pub broadcast: RelayBroadcast,
    pub forward: RelayForward,
    pub local: LocalBits,
    pub ap: ApBits,
}

impl SubproblemSolution {
    /// Slot lengths `(tau1, tau2, tau3)` used for evaluation.
    pub fn durations(&self, block_length_s: f64) -> [f64; 3] {
        [
            self.helper.rule.duration(block_length_s),
            self.broadcast.rule.duration(block_length_s),
            self.forward.rule.duration(block_length_s),
        ]
    }
}

/// Dual value, minimizers and a subgradient at one dual point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualEvaluation {
    pub value: f64,
    pub subproblems: SubproblemSolution,
    /// Constraint residuals at the minimizers, ordered like [`DualPoint::to_array`].
    pub subgradient: [f64; DIM],
}

/// Evaluates the dual function and one of its subgradients.
pub fn eval_dual(dual: &DualPoint, scenario: &Scenario) -> Result<DualEvaluation> {
    if !dual.is_feasible() {
        return Err(Error::DualInfeasible);
    }
    let s = scenario;
    let t = s.block_length_s;
    let total = s.task_bits;
    let sub = SubproblemSolution {
        helper: solve_subproblem1(dual, s),
        broadcast: solve_subproblem2(dual, s)?,
        forward: solve_subproblem3(dual, s),
        local: solve_subproblem4(dual, s),
        ap: solve_subproblem5(dual, s),
    };
    let value = sub.helper.value + sub.broadcast.value + sub.forward.value + sub.local.value + sub.ap.value
        - dual.mu1 * t
        + dual.mu2 * total;

    let [tau1, tau2, tau3] = sub.durations(t);
    let carried = |tau: f64, link, p| if tau > 0.0 { tau * s.rate(link, p) } else { 0.0 };
    let bits_helper = sub.helper.compute_rate * (t - tau1);
    let bits_ap = sub.ap.bits;
    let subgradient = [
        bits_helper - carried(tau1, Link::UserHelper, sub.helper.power_w),
        bits_ap - carried(tau2, Link::UserAp, sub.broadcast.power_w) - carried(tau3, Link::HelperAp, sub.forward.power_w),
        bits_ap - carried(tau2, Link::UserHelper, sub.broadcast.power_w),
        tau1 + tau2 + tau3 + bits_ap / s.f_ap_max_hz - t,
        total - sub.local.bits - bits_helper - bits_ap,
    ];
    Ok(DualEvaluation { value, subproblems: sub, subgradient })
}

/// Outcome class of [`solve_joint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// The task exceeds the maximum supportable number of bits.
    InfeasibleTask,
    /// The multipliers never became accurate enough for primal recovery.
    NotConverged,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::InfeasibleTask => "infeasible_task",
            SolveStatus::NotConverged => "not_converged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub ellipsoid: EllipsoidConfig,
    /// Relative tolerance for validating the recovered schedule.
    pub feasibility_tolerance: f64,
    /// Accepted duality gap is `max(gap_abs_j, gap_rel * primal)`.
    pub gap_rel: f64,
    pub gap_abs_j: f64,
    /// Extra attempts, each with 10x tighter ellipsoid tolerances.
    pub retries: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            ellipsoid: EllipsoidConfig::default(),
            feasibility_tolerance: crate::model::DEFAULT_TOLERANCE,
            gap_rel: 1e-3,
            gap_abs_j: 1e-6,
            retries: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub allocation: Allocation,
    pub energy: EnergyBreakdown,
    pub dual_value: f64,
    /// Primal energy minus dual value.
    pub duality_gap: f64,
    pub dual: DualPoint,
    pub iterations: usize,
    pub max_bits: f64,
}

impl SolveReport {
    fn empty(status: SolveStatus, max_bits: f64) -> Self {
        SolveReport {
            status,
            allocation: Allocation::default(),
            energy: EnergyBreakdown::default(),
            dual_value: 0.0,
            duality_gap: 0.0,
            dual: DualPoint::default(),
            iterations: 0,
            max_bits,
        }
    }
}

/// Minimum-energy schedule with default settings.
pub fn solve_joint(scenario: &Scenario) -> Result<SolveReport> {
    solve_joint_with(scenario, &SolveConfig::default())
}

/// Full pipeline: feasibility check, dual maximization, closed-form
/// powers and rates at the optimal multipliers, then LP recovery of slot
/// lengths and AP bits.
pub fn solve_joint_with(scenario: &Scenario, config: &SolveConfig) -> Result<SolveReport> {
    scenario.validate()?;
    let s = scenario;
    let max_bits = max_supportable_bits(s)?.max_bits;
    if s.task_bits > max_bits {
        return Ok(SolveReport::empty(SolveStatus::InfeasibleTask, max_bits));
    }
    if s.task_bits == 0.0 {
        return Ok(SolveReport::empty(SolveStatus::Optimal, max_bits));
    }

    let mut ellipsoid = config.ellipsoid;
    let mut iterations = 0;
    let mut fallback: Option<SolveReport> = None;
    for _attempt in 0..=config.retries {
        let outcome = ellipsoid_maximize(s, &ellipsoid)?;
        iterations += outcome.trace.iterations;
        let sub = &outcome.evaluation.subproblems;
        let powers = [sub.helper.power_w, sub.broadcast.power_w, sub.forward.power_w];
        if let Some(allocation) = recover_primal(powers, sub.helper.compute_rate, sub.local.bits, s)? {
            let energy = total_energy(&allocation, s)?;
            let gap = energy.e_total_j - outcome.value;
            let report = SolveReport {
                status: SolveStatus::NotConverged,
                allocation,
                energy,
                dual_value: outcome.value,
                duality_gap: gap,
                dual: outcome.dual,
                iterations,
                max_bits,
            };
            let feasible = validate_allocation(&allocation, s, config.feasibility_tolerance).is_feasible();
            let gap_ok = gap <= config.gap_abs_j.max(config.gap_rel * energy.e_total_j);
            if feasible && gap_ok {
                return Ok(SolveReport { status: SolveStatus::Optimal, ..report });
            }
            if feasible && fallback.as_ref().map_or(true, |f| energy.e_total_j < f.energy.e_total_j) {
                fallback = Some(report);
            }
        }
        ellipsoid = ellipsoid.tightened(10.0);
    }
    Ok(fallback.unwrap_or_else(|| SolveReport { iterations, ..SolveReport::empty(SolveStatus::NotConverged, max_bits) }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_multipliers_give_zero_value() {
        let s = Scenario::line_layout(120.0, 0.1, 2e4).unwrap();
        let e = eval_dual(&DualPoint::default(), &s).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.subgradient, [0.0, 0.0, 0.0, -0.1, 2e4]);
    }

    #[test]
    fn infeasible_dual_point_is_rejected() {
        let s = Scenario::line_layout(120.0, 0.1, 2e4).unwrap();
        let d = DualPoint { mu1: -1.0, ..DualPoint::default() };
        assert_eq!(eval_dual(&d, &s), Err(Error::DualInfeasible));
        let free_mu2 = DualPoint { mu2: -3.0, ..DualPoint::default() };
        assert!(eval_dual(&free_mu2, &s).is_ok());
    }

    #[test]
    fn scaling_round_trip() {
        let d = DualPoint { lambda1: 1e-7, lambda2: 2e-7, lambda3: 3e-7, mu1: 0.5, mu2: -4e-7 };
        let back = d.to_scaled(1e6).from_scaled(1e6);
        for (a, b) in d.to_array().iter().zip(back.to_array()) {
            assert!((a - b).abs() <= 1e-15 * a.abs());
        }
    }

    #[test]
    fn dual_value_is_unit_invariant() {
        let s = Scenario::line_layout(90.0, 0.05, 3e4).unwrap();
        let d = DualPoint { lambda1: 4e-7, lambda2: 1e-6, lambda3: 2e-7, mu1: 0.3, mu2: 6e-7 };
        let si = eval_dual(&d, &s).unwrap().value;
        let scaled = eval_dual(&d.to_scaled(1e6), &s.rescale_bits(1e6)).unwrap().value;
        assert!((si - scaled).abs() <= 1e-9 * si.abs().max(1e-12), "{si} vs {scaled}");
    }
}
