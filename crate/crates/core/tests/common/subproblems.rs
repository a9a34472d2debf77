//! Subproblem objectives written out directly from the partial Lagrangian,
//! for auditing the closed-form minimizers against random feasible points.

use coopmec_core::dual::{
    solve_subproblem1, solve_subproblem2, solve_subproblem3, solve_subproblem4, solve_subproblem5, DualPoint,
};
use coopmec_core::model::{Link, Scenario};
use rand::Rng;

/// `tau r(E / tau)` with the convention `0 r(0/0) = 0`.
fn carried(s: &Scenario, link: Link, tau: f64, energy: f64) -> f64 {
    if tau > 0.0 {
        tau * s.rate(link, energy / tau)
    } else {
        0.0
    }
}

pub fn helper_objective(d: &DualPoint, s: &Scenario, tau: f64, energy: f64, bits: f64) -> f64 {
    let t = s.block_length_s;
    let compute = if bits > 0.0 { s.helper_energy(bits, t - tau) } else { 0.0 };
    energy + d.mu1 * tau - d.lambda1 * carried(s, Link::UserHelper, tau, energy) + compute
        + (d.lambda1 - d.mu2) * bits
}

pub fn broadcast_objective(d: &DualPoint, s: &Scenario, tau: f64, energy: f64) -> f64 {
    energy + d.mu1 * tau
        - d.lambda2 * carried(s, Link::UserAp, tau, energy)
        - d.lambda3 * carried(s, Link::UserHelper, tau, energy)
}

pub fn forward_objective(d: &DualPoint, s: &Scenario, tau: f64, energy: f64) -> f64 {
    energy + d.mu1 * tau - d.lambda2 * carried(s, Link::HelperAp, tau, energy)
}

pub fn local_objective(d: &DualPoint, s: &Scenario, bits: f64) -> f64 {
    s.local_energy(bits) - d.mu2 * bits
}

pub fn ap_objective(d: &DualPoint, s: &Scenario, bits: f64) -> f64 {
    (d.lambda2 + d.lambda3 + d.mu1 / s.f_ap_max_hz - d.mu2) * bits
}

/// Uniform on `[0, hi]`, hitting each endpoint one time in ten.
fn sample<R: Rng>(rng: &mut R, hi: f64) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => hi,
        _ => rng.gen_range(0.0..=hi),
    }
}

/// Number of random feasible points beating each closed form (index
/// `i` is subproblem `i + 1`), plus any mismatch between a reported value
/// and the objective at the reported minimizer.
pub fn audit<R: Rng>(d: &DualPoint, s: &Scenario, samples: usize, rng: &mut R) -> [usize; 5] {
    let t = s.block_length_s;
    let beats = |candidate: f64, closed: f64, scale: f64| candidate < closed - 1e-9 * (scale + closed.abs());
    let mut bad = [0usize; 5];

    let sp1 = solve_subproblem1(d, s);
    let tau1 = sp1.rule.duration(t);
    let sp1_obj = helper_objective(d, s, tau1, tau1 * sp1.power_w, sp1.compute_rate * (t - tau1));
    let sp2 = solve_subproblem2(d, s).expect("broadcast power");
    let tau2 = sp2.rule.duration(t);
    let sp2_obj = broadcast_objective(d, s, tau2, tau2 * sp2.power_w);
    let sp3 = solve_subproblem3(d, s);
    let tau3 = sp3.rule.duration(t);
    let sp3_obj = forward_objective(d, s, tau3, tau3 * sp3.power_w);
    let sp4 = solve_subproblem4(d, s);
    let sp4_obj = local_objective(d, s, sp4.bits);
    let sp5 = solve_subproblem5(d, s);
    let sp5_obj = ap_objective(d, s, sp5.bits);

    let values = [sp1.value, sp2.value, sp3.value, sp4.value, sp5.value];
    let objs = [sp1_obj, sp2_obj, sp3_obj, sp4_obj, sp5_obj];
    for i in 0..5 {
        if (values[i] - objs[i]).abs() > 1e-9 * (1.0 + objs[i].abs()) {
            bad[i] += 1;
        }
    }

    for _ in 0..samples {
        let tau = sample(rng, t);
        let e_user = sample(rng, tau * s.p_user_max_w);
        let e_helper = sample(rng, tau * s.p_helper_max_w);
        let lh = sample(rng, (t - tau) * s.helper_bit_rate_cap());
        // scale: magnitude of the terms involved, so tolerances are relative
        let scale1 = e_user + d.mu1 * t + d.lambda1 * lh.max(t * s.rate(Link::UserHelper, s.p_user_max_w));
        if beats(helper_objective(d, s, tau, e_user, lh), sp1_obj, scale1) {
            bad[0] += 1;
        }
        let scale2 = e_user + d.mu1 * t + (d.lambda2 + d.lambda3) * t * s.rate(Link::UserHelper, s.p_user_max_w);
        if beats(broadcast_objective(d, s, tau, e_user), sp2_obj, scale2) {
            bad[1] += 1;
        }
        let scale3 = e_helper + d.mu1 * t + d.lambda2 * t * s.rate(Link::HelperAp, s.p_helper_max_w);
        if beats(forward_objective(d, s, tau, e_helper), sp3_obj, scale3) {
            bad[2] += 1;
        }
        let lu = sample(rng, s.local_bit_cap());
        if beats(local_objective(d, s, lu), sp4_obj, s.local_energy(s.local_bit_cap()) + d.mu2.abs() * lu) {
            bad[3] += 1;
        }
        let la = sample(rng, s.task_bits);
        if beats(ap_objective(d, s, la), sp5_obj, 0.0) {
            bad[4] += 1;
        }
    }
    bad
}

/// A dual-feasible point with per-bit prices spread over several decades.
pub fn random_dual<R: Rng>(rng: &mut R) -> DualPoint {
    let mut price = |lo: f64, hi: f64| 10f64.powf(rng.gen_range(lo..hi));
    let lambda1 = price(-9.0, -5.0);
    let lambda2 = price(-9.0, -5.0);
    let lambda3 = price(-9.0, -5.0);
    let mu1 = price(-4.0, 1.0);
    let mu2 = price(-9.0, -5.0) * if rng.gen_bool(0.8) { 1.0 } else { -1.0 };
    DualPoint { lambda1, lambda2, lambda3, mu1, mu2 }
}
