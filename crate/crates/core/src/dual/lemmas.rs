//! Closed-form minimizers of the five subproblems the partial Lagrangian
//! separates into, for fixed multipliers.
//!
//! The slot-length subproblems are perspectives of per-unit-time costs, so
//! their objective is linear in the slot length once the power (and, for the
//! helper, the computation rate) is chosen. The sign of that per-unit cost,
//! `rho`, decides whether the slot takes the whole block or nothing.

use super::DualPoint;
use crate::math::{clamp, cube, sqrt, LN_2};
use crate::model::{Link, Scenario};
use crate::{Error, Result};

/// How a slot length is chosen from the sign of its per-unit cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRule {
    /// Negative cost: the slot spans the block.
    Full,
    /// Positive cost: the slot is empty.
    Empty,
    /// Zero cost: any length is optimal. Evaluated as empty.
    Indifferent,
}

impl SlotRule {
    pub fn from_cost(rho: f64) -> Self {
        if rho < 0.0 {
            SlotRule::Full
        } else if rho > 0.0 {
            SlotRule::Empty
        } else {
            SlotRule::Indifferent
        }
    }

    /// Slot length used when evaluating the dual function.
    pub fn duration(self, block_length_s: f64) -> f64 {
        match self {
            SlotRule::Full => block_length_s,
            SlotRule::Empty | SlotRule::Indifferent => 0.0,
        }
    }
}

/// User → helper offload and helper computing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelperOffload {
    pub power_w: f64,
    /// Helper computation rate `M1`, bits per second of its window.
    pub compute_rate: f64,
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rule: SlotRule,
    /// Contribution to the dual function.
    pub value: f64,
}

/// User broadcast to helper and AP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayBroadcast {
    pub power_w: f64,
    pub rho: f64,
    pub alpha: f64,
    pub rule: SlotRule,
    pub value: f64,
}

/// Helper → AP forwarding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayForward {
    pub power_w: f64,
    pub rho: f64,
    pub alpha: f64,
    pub rule: SlotRule,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBits {
    pub bits: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApBits {
    pub bits: f64,
    /// Net price per AP bit, `lambda2 + lambda3 + mu1 / f_a,max - mu2`.
    pub price: f64,
    pub value: f64,
}

/// Derivative of `B log2(1 + P snr)` with respect to `P`.
fn rate_slope(s: &Scenario, snr: f64, p: f64) -> f64 {
    s.bandwidth_hz * snr / ((1.0 + p * snr) * LN_2)
}

/// Water-filling level before clamping: `lambda B / ln 2 - 1/snr`.
pub(crate) fn water_level(s: &Scenario, lambda: f64, link: Link) -> f64 {
    lambda * s.bandwidth_hz / LN_2 - 1.0 / s.snr_per_watt(link)
}

/// Helper offload subproblem over `(E1, tau1, l_h)`.
pub fn solve_subproblem1(d: &DualPoint, s: &Scenario) -> HelperOffload {
    let t = s.block_length_s;
    let pu = s.p_user_max_w;
    let snr = s.snr_per_watt(Link::UserHelper);
    let rate_cap = s.helper_bit_rate_cap();
    let k = s.kappa_helper * cube(s.cycles_per_bit_helper);

    let power_w = clamp(water_level(s, d.lambda1, Link::UserHelper), 0.0, pu);
    let margin = d.mu2 - d.lambda1;
    let compute_rate = if margin >= 0.0 { clamp(sqrt(margin / (3.0 * k)), 0.0, rate_cap) } else { 0.0 };

    let alpha = if power_w == pu { d.lambda1 * rate_slope(s, snr, power_w) - 1.0 } else { 0.0 };
    let beta = if compute_rate == rate_cap { margin - 3.0 * k * compute_rate * compute_rate } else { 0.0 };
    let rate = s.rate(Link::UserHelper, power_w);
    let rho = d.mu1 - d.lambda1 * rate
        + 2.0 * k * cube(compute_rate)
        + d.lambda1 * power_w * rate_slope(s, snr, power_w)
        - alpha * pu
        + beta * rate_cap;
    let rule = SlotRule::from_cost(rho);

    let tau = rule.duration(t);
    let per_slot = power_w + d.mu1 - d.lambda1 * rate;
    let per_window = k * cube(compute_rate) + (d.lambda1 - d.mu2) * compute_rate;
    let value = tau * per_slot + (t - tau) * per_window;
    HelperOffload { power_w, compute_rate, rho, alpha, beta, rule, value }
}

/// Coefficients `(u, v, w)` of the quadratic whose larger root is the
/// stationary broadcast power.
pub(crate) fn broadcast_quadratic(d: &DualPoint, s: &Scenario) -> (f64, f64, f64) {
    let a = s.snr_per_watt(Link::UserAp);
    let b = s.snr_per_watt(Link::UserHelper);
    let c = LN_2 / s.bandwidth_hz;
    let u = c * a * b;
    let v = c * (a + b) - (d.lambda2 + d.lambda3) * a * b;
    let w = c - d.lambda2 * a - d.lambda3 * b;
    (u, v, w)
}

/// Broadcast power before clamping to `[0, P_u,max]`.
pub(crate) fn broadcast_power_unclamped(d: &DualPoint, s: &Scenario) -> Result<f64> {
    let (u, v, w) = broadcast_quadratic(d, s);
    let mut disc = v * v - 4.0 * u * w;
    if disc < 0.0 {
        if disc < -1e-12 * v * v {
            return Err(Error::Internal("broadcast power quadratic has no real root"));
        }
        disc = 0.0;
    }
    let root = sqrt(disc);
    // cancellation-free form of (root - v) / (2u)
    Ok(if v > 0.0 { -2.0 * w / (v + root) } else { (root - v) / (2.0 * u) })
}

/// Broadcast subproblem over `(E2, tau2)`.
pub fn solve_subproblem2(d: &DualPoint, s: &Scenario) -> Result<RelayBroadcast> {
    let t = s.block_length_s;
    let pu = s.p_user_max_w;
    let a = s.snr_per_watt(Link::UserAp);
    let b = s.snr_per_watt(Link::UserHelper);
    let power_w = clamp(broadcast_power_unclamped(d, s)?, 0.0, pu);

    let slope_ap = rate_slope(s, a, power_w);
    let slope_helper = rate_slope(s, b, power_w);
    let alpha = if power_w == pu { d.lambda3 * slope_helper + d.lambda2 * slope_ap - 1.0 } else { 0.0 };
    let r0 = s.rate(Link::UserAp, power_w);
    let r01 = s.rate(Link::UserHelper, power_w);
    let rho = d.mu1 - d.lambda2 * r0 + d.lambda2 * power_w * slope_ap - d.lambda3 * r01
        + d.lambda3 * power_w * slope_helper
        - alpha * pu;
    let rule = SlotRule::from_cost(rho);
    let value = rule.duration(t) * (power_w + d.mu1 - d.lambda2 * r0 - d.lambda3 * r01);
    Ok(RelayBroadcast { power_w, rho, alpha, rule, value })
}

/// Forwarding subproblem over `(E3, tau3)`.
///
/// The helper → AP link is received at the AP, so its SNR uses the AP noise.
pub fn solve_subproblem3(d: &DualPoint, s: &Scenario) -> RelayForward {
    let t = s.block_length_s;
    let ph = s.p_helper_max_w;
    let snr = s.snr_per_watt(Link::HelperAp);
    let power_w = clamp(water_level(s, d.lambda2, Link::HelperAp), 0.0, ph);
    let slope = rate_slope(s, snr, power_w);
    let alpha = if power_w == ph { d.lambda2 * slope - 1.0 } else { 0.0 };
    let r1 = s.rate(Link::HelperAp, power_w);
    let rho = d.mu1 + d.lambda2 * power_w * slope - d.lambda2 * r1 - alpha * ph;
    let rule = SlotRule::from_cost(rho);
    let value = rule.duration(t) * (power_w + d.mu1 - d.lambda2 * r1);
    RelayForward { power_w, rho, alpha, rule, value }
}

/// Local computing subproblem over `l_u`.
pub fn solve_subproblem4(d: &DualPoint, s: &Scenario) -> LocalBits {
    let t = s.block_length_s;
    let bits = if d.mu2 > 0.0 {
        let k = s.kappa_user * cube(s.cycles_per_bit_user);
        clamp(t * sqrt(d.mu2 / (3.0 * k)), 0.0, s.local_bit_cap())
    } else {
        0.0
    };
    let value = s.local_energy(bits) - d.mu2 * bits;
    LocalBits { bits, value }
}

/// AP offload subproblem over `l_a in [0, L]`.
pub fn solve_subproblem5(d: &DualPoint, s: &Scenario) -> ApBits {
    let price = d.lambda2 + d.lambda3 + d.mu1 / s.f_ap_max_hz - d.mu2;
    let bits = if price < 0.0 { s.task_bits } else { 0.0 };
    ApBits { bits, price, value: price * bits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_scenario() -> Scenario {
        Scenario::line_layout(120.0, 0.1, 2e4).unwrap()
    }

    fn point(l1: f64, l2: f64, l3: f64, m1: f64, m2: f64) -> DualPoint {
        DualPoint { lambda1: l1, lambda2: l2, lambda3: l3, mu1: m1, mu2: m2 }
    }

    #[test]
    fn helper_power_examples() {
        let s = default_scenario();
        let sp = solve_subproblem1(&point(0.0, 0.0, 0.0, 0.0, 0.0), &s);
        assert_eq!(sp.power_w, 0.0);

        let s2 = Scenario { gain_user_helper: 5.787e-10, noise_helper_w: 1e-10, bandwidth_hz: 1e6, ..s };
        let sp = solve_subproblem1(&point(8.129e-7, 0.0, 0.0, 0.0, 0.0), &s2);
        assert!((sp.power_w - 1.0).abs() < 1e-3, "{}", sp.power_w);
    }

    #[test]
    fn helper_rate_vanishes_below_link_price() {
        let s = default_scenario();
        let sp = solve_subproblem1(&point(2e-7, 0.0, 0.0, 0.0, 1e-7), &s);
        assert_eq!(sp.compute_rate, 0.0);
        assert_eq!(sp.beta, 0.0);
    }

    #[test]
    fn helper_rho_equals_per_unit_cost_difference() {
        let s = default_scenario().rescale_bits(1e6);
        for &(l1, m1, m2) in &[(0.3, 0.2, 0.9), (9.0, 0.1, 30.0), (0.01, 2.0, 0.02), (50.0, 0.5, 0.1)] {
            let d = point(l1, 0.0, 0.0, m1, m2);
            let sp = solve_subproblem1(&d, &s);
            let k = s.kappa_helper * cube(s.cycles_per_bit_helper);
            let per_slot = sp.power_w + m1 - l1 * s.rate(Link::UserHelper, sp.power_w);
            let per_window = k * cube(sp.compute_rate) + (l1 - m2) * sp.compute_rate;
            let diff = per_slot - per_window;
            assert!((sp.rho - diff).abs() <= 1e-9 * (1.0 + diff.abs()), "{} vs {}", sp.rho, diff);
        }
    }

    #[test]
    fn broadcast_power_is_zero_without_relay_prices() {
        let s = default_scenario();
        let sp = solve_subproblem2(&point(0.0, 0.0, 0.0, 0.0, 0.0), &s).unwrap();
        assert_eq!(sp.power_w, 0.0);
        let raw = broadcast_power_unclamped(&point(0.0, 0.0, 0.0, 0.0, 0.0), &s).unwrap();
        let a = s.snr_per_watt(Link::UserAp);
        let b = s.snr_per_watt(Link::UserHelper);
        let expect = -a.min(b) / (a * b);
        assert!((raw - expect).abs() <= 1e-9 * expect.abs(), "{raw} vs {expect}");
    }

    #[test]
    fn broadcast_power_saturates_for_large_prices() {
        let s = default_scenario();
        let sp = solve_subproblem2(&point(0.0, 1.0, 1.0, 0.0, 0.0), &s).unwrap();
        assert_eq!(sp.power_w, s.p_user_max_w);
        assert!(sp.alpha > 0.0);
    }

    #[test]
    fn broadcast_matches_textbook_root() {
        let s = default_scenario().rescale_bits(1e6);
        let d = point(0.0, 0.4, 0.7, 0.0, 0.0);
        let (u, v, w) = broadcast_quadratic(&d, &s);
        let textbook = (sqrt(v * v - 4.0 * u * w) - v) / (2.0 * u);
        let ours = broadcast_power_unclamped(&d, &s).unwrap();
        assert!((ours - textbook).abs() <= 1e-9 * (1.0 + textbook.abs()));
    }

    #[test]
    fn forward_power_limits() {
        let s = default_scenario();
        assert_eq!(solve_subproblem3(&point(0.0, 0.0, 0.0, 0.0, 0.0), &s).power_w, 0.0);
        assert_eq!(solve_subproblem3(&point(0.0, 1e3, 0.0, 0.0, 0.0), &s).power_w, s.p_helper_max_w);
    }

    #[test]
    fn local_bits_examples() {
        let s = default_scenario();
        assert_eq!(solve_subproblem4(&point(0.0, 0.0, 0.0, 0.0, 0.0), &s).bits, 0.0);
        let lu = solve_subproblem4(&point(0.0, 0.0, 0.0, 0.0, 3e-8), &s).bits;
        assert!((lu - 1e4).abs() < 1e-6, "{lu}");
        assert_eq!(solve_subproblem4(&point(0.0, 0.0, 0.0, 0.0, 1.0), &s).bits, 2e5);
        assert_eq!(solve_subproblem4(&point(0.0, 0.0, 0.0, 0.0, -1.0), &s).bits, 0.0);
    }

    #[test]
    fn ap_bits_follow_price_sign() {
        let s = default_scenario();
        let at = |price: f64| solve_subproblem5(&point(0.0, 0.0, 0.0, 0.0, -price), &s);
        assert_eq!(at(1e-3).bits, 0.0);
        assert_eq!(at(-1e-3).bits, s.task_bits);
        assert_eq!(at(0.0).bits, 0.0);
        assert_eq!(SlotRule::from_cost(0.0).duration(1.0), 0.0);
    }
}
