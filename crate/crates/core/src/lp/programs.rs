//! The two scheduling LPs: maximum supportable task size and primal recovery
//! from converged dual multipliers.
//!
//! Both are posed on scaled variables (time in units of the block length,
//! bits in units of a per-instance bit scale) so that every coefficient is of
//! order one before the simplex sees it.

use alloc::vec;

use super::{solve_lp, LinearProgram, LpStatus};
use crate::math::cube;
use crate::model::{Allocation, Link, Scenario};
use crate::{Error, Result};

/// Largest task the system can finish within one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportableBits {
    pub max_bits: f64,
    /// A schedule that reaches `max_bits` at full power and CPU speed.
    pub witness: Allocation,
}

/// Maximum number of task bits the system can support.
///
/// Every node runs flat out: `P1 = P2 = P_u,max`, `P3 = P_h,max`, both CPUs
/// at their caps, the relay pair exactly balanced and the block fully used.
/// The task size `L` of `scenario` is ignored; a scenario is feasible iff
/// `L <= max_bits`.
pub fn max_supportable_bits(scenario: &Scenario) -> Result<SupportableBits> {
    scenario.validate()?;
    let s = scenario;
    let t = s.block_length_s;
    let pu = s.p_user_max_w;
    let ph = s.p_helper_max_w;
    let r01 = s.rate(Link::UserHelper, pu);
    let r0 = s.rate(Link::UserAp, pu);
    let r1 = s.rate(Link::HelperAp, ph);
    let local_cap = s.local_bit_cap();
    let helper_cap = t * s.helper_bit_rate_cap();
    let unit = local_cap.max(helper_cap).max(t * r01);

    // x = [tau1, tau2, tau3, l_u, l_h, l_a] scaled by (T, T, T, U, U, U)
    let rt = |r: f64| r * t / unit;
    let lp = LinearProgram::new(vec![0.0, 0.0, 0.0, -1.0, -1.0, -1.0])
        .le(vec![-rt(r01), 0.0, 0.0, 0.0, 1.0, 0.0], 0.0)
        .le(vec![0.0, -rt(r01), 0.0, 0.0, 0.0, 1.0], 0.0)
        .eq(vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0], local_cap / unit)
        .eq(vec![helper_cap / unit, 0.0, 0.0, 0.0, 1.0, 0.0], helper_cap / unit)
        .eq(vec![1.0, 1.0, 1.0, 0.0, 0.0, unit / (s.f_ap_max_hz * t)], 1.0)
        .eq(vec![0.0, rt(r0) - rt(r01), rt(r1), 0.0, 0.0, 0.0], 0.0)
        .bounds(0, 0.0, 1.0)
        .bounds(1, 0.0, 1.0)
        .bounds(2, 0.0, 1.0);
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Internal("supportable-bits LP has no optimum"));
    }
    let x = &sol.x;
    let witness = Allocation {
        tau1_s: x[0] * t,
        tau2_s: x[1] * t,
        tau3_s: x[2] * t,
        p1_w: pu,
        p2_w: pu,
        p3_w: ph,
        bits_local: x[3] * unit,
        bits_helper: x[4] * unit,
        bits_ap: x[5] * unit,
    };
    Ok(SupportableBits { max_bits: -sol.value * unit, witness })
}

/// How far primal recovery may move the local bits away from their
/// dual-optimal value, as a fraction of the task size.
pub const LOCAL_BITS_BAND: f64 = 1e-3;

/// Slot lengths and AP bits that complete a dual solution.
///
/// With the powers and helper computation rate (`l_h = helper_rate (T - tau1)`)
/// fixed at their dual-optimal values, the remaining problem is linear in
/// `(tau1, tau2, tau3, l_a)`. The local bits are also allowed to move within
/// [`LOCAL_BITS_BAND`] of `bits_local`, priced at their marginal energy: with
/// approximate multipliers the dual-optimal split can miss the task size by a
/// few bits, which would otherwise leave the LP infeasible whenever the time
/// budget binds or the radios are idle.
///
/// Returns `Ok(None)` when the LP is infeasible, which means the multipliers
/// were not accurate enough. The returned allocation satisfies the task
/// partition exactly: `bits_ap` is set to `L - bits_local - bits_helper`.
pub fn recover_primal(
    powers_w: [f64; 3],
    helper_rate: f64,
    bits_local: f64,
    scenario: &Scenario,
) -> Result<Option<Allocation>> {
    let s = scenario;
    let t = s.block_length_s;
    let total = s.task_bits;
    let [p1, p2, p3] = powers_w;
    let unit = if total > 0.0 { total } else { 1.0 };
    let rt = |r: f64| r * t / unit;
    let r01_1 = rt(s.rate(Link::UserHelper, p1));
    let r0_2 = rt(s.rate(Link::UserAp, p2));
    let r01_2 = rt(s.rate(Link::UserHelper, p2));
    let r1_3 = rt(s.rate(Link::HelperAp, p3));
    let m = rt(helper_rate);
    let helper_cost = s.kappa_helper * cube(s.cycles_per_bit_helper * helper_rate);
    let local_cap = s.local_bit_cap().min(total);
    let lu_lo = (bits_local - LOCAL_BITS_BAND * total).max(0.0).min(local_cap);
    let lu_hi = (bits_local + LOCAL_BITS_BAND * total).min(local_cap);
    // d/dl of kappa c^3 l^3 / T^2, per scaled unit and per block length
    let local_price = 3.0 * s.kappa_user * cube(s.cycles_per_bit_user) * bits_local * bits_local / (t * t) * unit / t;

    // x = [tau1, tau2, tau3, l_a, l_u] scaled by (T, T, T, U, U); constant K T dropped
    let lp = LinearProgram::new(vec![p1 - helper_cost, p2, p3, 0.0, local_price])
        .le(vec![-(r01_1 + m), 0.0, 0.0, 0.0, 0.0], -m)
        .le(vec![0.0, -r0_2, -r1_3, 1.0, 0.0], 0.0)
        .le(vec![0.0, -r01_2, 0.0, 1.0, 0.0], 0.0)
        .eq(vec![-m, 0.0, 0.0, 1.0, 1.0], total / unit - m)
        .le(vec![1.0, 1.0, 1.0, unit / (s.f_ap_max_hz * t), 0.0], 1.0)
        .bounds(0, 0.0, 1.0)
        .bounds(1, 0.0, 1.0)
        .bounds(2, 0.0, 1.0)
        .bounds(4, lu_lo / unit, lu_hi / unit);
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Ok(None),
        LpStatus::Unbounded => return Err(Error::Internal("recovery LP is bounded by construction")),
    }
    let tau = [sol.x[0] * t, sol.x[1] * t, sol.x[2] * t];
    let mut bits_local = (sol.x[4] * unit).clamp(lu_lo, lu_hi);
    let bits_helper = if helper_rate > 0.0 { helper_rate * (t - tau[0]) } else { 0.0 };
    let mut bits_ap = (total - bits_local - bits_helper).max(0.0);
    if bits_ap <= 1e-12 * total {
        // rounding residue; no radio capacity was reserved for it
        bits_ap = 0.0;
        bits_local = (total - bits_helper).max(0.0);
    }
    let power = |tau: f64, p: f64| if tau > 0.0 { p } else { 0.0 };
    Ok(Some(Allocation {
        tau1_s: tau[0],
        tau2_s: tau[1],
        tau3_s: tau[2],
        p1_w: power(tau[0], p1),
        p2_w: power(tau[1], p2),
        p3_w: power(tau[2], p3),
        bits_local,
        bits_helper,
        bits_ap,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_allocation, DEFAULT_TOLERANCE};

    fn default_scenario() -> Scenario {
        Scenario::line_layout(120.0, 0.1, 2e4).unwrap()
    }

    #[test]
    fn local_cap_is_a_lower_bound() {
        let s = default_scenario();
        let sup = max_supportable_bits(&s).unwrap();
        assert!(sup.max_bits >= 2e5);
        assert!((sup.witness.bits_local - 2e5).abs() < 1e-6);
        let total = sup.witness.bits_local + sup.witness.bits_helper + sup.witness.bits_ap;
        assert!((total - sup.max_bits).abs() <= 1e-9 * sup.max_bits);
        let at_cap = Scenario { task_bits: sup.max_bits, ..s };
        assert!(validate_allocation(&sup.witness, &at_cap, 1e-8).is_feasible());
    }

    #[test]
    fn supportable_bits_grow_with_time_and_power() {
        let s = default_scenario();
        let base = max_supportable_bits(&s).unwrap().max_bits;
        let longer = max_supportable_bits(&Scenario { block_length_s: 0.2, ..s }).unwrap().max_bits;
        let louder = max_supportable_bits(&Scenario { p_user_max_w: 20.0, ..s }).unwrap().max_bits;
        assert!(longer >= base && louder >= base);
    }

    #[test]
    fn pure_local_recovery_is_free() {
        let s = default_scenario();
        let a = recover_primal([3.0, 2.0, 1.0], 0.0, s.task_bits, &s).unwrap().unwrap();
        assert_eq!((a.tau1_s, a.tau2_s, a.tau3_s, a.bits_ap), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(crate::model::total_energy(&a, &s).unwrap().e_total_j, s.local_energy(s.task_bits));
    }

    #[test]
    fn silent_radios_cannot_carry_residual_bits() {
        let s = default_scenario();
        assert_eq!(recover_primal([0.0; 3], 0.0, s.task_bits / 2.0, &s).unwrap(), None);
    }

    #[test]
    fn recovery_honours_partition_and_rates() {
        let s = default_scenario();
        let a = recover_primal([1.0, 2.0, 1.5], 1e5, 5e3, &s).unwrap().unwrap();
        assert_eq!(a.bits_local + a.bits_helper + a.bits_ap, s.task_bits);
        assert!(validate_allocation(&a, &s, DEFAULT_TOLERANCE * 100.0).is_feasible());
    }
}
