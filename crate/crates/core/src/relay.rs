//! Cheapest way to deliver bits to the AP over the decode-and-forward relay
//! for fixed slot lengths. Shared by the brute-force oracle and the
//! communication-cooperation benchmark; the dual solver never calls it.

use crate::model::{Link, Scenario};
use crate::search;

/// Optimal relay transmission for fixed `(tau2, tau3, bits)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RelayPlan {
    pub energy_j: f64,
    pub p2_w: f64,
    pub p3_w: f64,
}

/// Minimizes `tau2 P2 + tau3 P3` subject to both relay rate bounds and the
/// power caps. `P3` follows in closed form from the residual the direct link
/// leaves; `P2` is found by line search over its feasible interval, on which
/// the cost is convex. `None` when the bits cannot be delivered.
pub(crate) fn cheapest_relay(s: &Scenario, tau2: f64, tau3: f64, bits: f64, evals: usize) -> Option<RelayPlan> {
    if bits <= 0.0 {
        return Some(RelayPlan { energy_j: 0.0, p2_w: 0.0, p3_w: 0.0 });
    }
    if tau2 <= 0.0 {
        return None;
    }
    let pu = s.p_user_max_w;
    let ph = s.p_helper_max_w;
    let first_hop = s.power_for(Link::UserHelper, bits, tau2);
    if first_hop > pu {
        return None;
    }
    if tau3 <= 0.0 {
        let p2 = first_hop.max(s.power_for(Link::UserAp, bits, tau2));
        return (p2 <= pu).then_some(RelayPlan { energy_j: tau2 * p2, p2_w: p2, p3_w: 0.0 });
    }
    let forward_cap = tau3 * s.rate(Link::HelperAp, ph);
    let direct_floor = s.power_for(Link::UserAp, (bits - forward_cap).max(0.0), tau2);
    let lo = first_hop.max(direct_floor);
    if lo > pu {
        return None;
    }
    let p3_for = |p2: f64| {
        let residual = bits - tau2 * s.rate(Link::UserAp, p2);
        s.power_for(Link::HelperAp, residual.max(0.0), tau3).min(ph)
    };
    let cost = |p2: f64| tau2 * p2 + tau3 * p3_for(p2);
    let (p2, energy_j) = if direct_convex_on(&cost, lo, pu) {
        search::golden_min(cost, lo, pu, evals)
    } else {
        search::scan_then_golden(cost, lo, pu, evals, evals)
    };
    Some(RelayPlan { energy_j, p2_w: p2, p3_w: p3_for(p2) })
}

/// Cheap empirical convexity probe on five equispaced points.
fn direct_convex_on<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> bool {
    if !(hi > lo) {
        return true;
    }
    let h = (hi - lo) / 4.0;
    let v: [f64; 5] = core::array::from_fn(|i| f(lo + h * i as f64));
    v.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] >= -1e-12 * (w[0].abs() + w[2].abs() + 1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Allocation;
    use crate::model::{validate_allocation, DEFAULT_TOLERANCE};

    #[test]
    fn plan_is_feasible_and_beats_scan() {
        let s = Scenario::line_layout(120.0, 0.1, 2e4).unwrap();
        let (tau2, tau3, bits) = (0.01, 0.015, 2e4);
        let plan = cheapest_relay(&s, tau2, tau3, bits, 60).unwrap();
        let a = Allocation {
            tau2_s: tau2,
            tau3_s: tau3,
            p2_w: plan.p2_w,
            p3_w: plan.p3_w,
            bits_ap: bits,
            ..Allocation::default()
        };
        assert!(validate_allocation(&a, &s, DEFAULT_TOLERANCE).is_feasible());
        let lo = s.power_for(Link::UserHelper, bits, tau2);
        for i in 0..=1000 {
            let p2 = lo + (s.p_user_max_w - lo) * i as f64 / 1000.0;
            let res = (bits - tau2 * s.rate(Link::UserAp, p2)).max(0.0);
            let p3 = s.power_for(Link::HelperAp, res, tau3);
            if p3 <= s.p_helper_max_w {
                assert!(plan.energy_j <= tau2 * p2 + tau3 * p3 + 1e-12);
            }
        }
    }

    #[test]
    fn impossible_delivery_is_rejected() {
        let s = Scenario::line_layout(120.0, 0.1, 2e4).unwrap();
        assert!(cheapest_relay(&s, 0.0, 0.05, 1e3, 60).is_none());
        assert!(cheapest_relay(&s, 1e-4, 0.05, 1e5, 60).is_none());
        assert_eq!(cheapest_relay(&s, 0.0, 0.0, 0.0, 60).unwrap().energy_j, 0.0);
    }
}
