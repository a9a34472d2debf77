use coopmec_core::dual::{ellipsoid_maximize, EllipsoidConfig};
use coopmec_core::lp::max_supportable_bits;
use coopmec_core::model::{validate_allocation, DEFAULT_TOLERANCE};
use coopmec_core::oracle::{
    brute_force_min_energy, brute_force_restricted, supportable_bits_sweep, GridSpec, Restriction,
};
use coopmec_core::schemes::{communication_coop, computation_coop, local_only, run_scheme, SchemeId};
use coopmec_core::{solve_joint, Scenario, SolveStatus};

fn default_scenario() -> Scenario {
    Scenario::line_layout(120.0, 0.1, 2e4).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn joint_agrees_with_oracle_on_default_scenario() {
    let s = default_scenario();
    let joint = solve_joint(&s).unwrap();
    assert_eq!(joint.status, SolveStatus::Optimal);
    let oracle = brute_force_min_energy(&s, &GridSpec::default()).unwrap().unwrap();
    assert!(rel(joint.energy.e_total_j, oracle.energy_j) <= 0.02);
    // weak duality against an independently found feasible point
    assert!(joint.dual_value <= oracle.energy_j * (1.0 + 1e-9));
}

#[test]
fn joint_agrees_with_oracle_when_the_block_is_short() {
    let s = Scenario::line_layout(120.0, 0.02, 2e4).unwrap();
    let joint = solve_joint(&s).unwrap();
    let oracle = brute_force_min_energy(&s, &GridSpec::default()).unwrap().unwrap();
    assert!(rel(joint.energy.e_total_j, oracle.energy_j) <= 0.02);
    // all three offload paths are used here
    let a = joint.allocation;
    assert!(a.bits_local > 0.0 && a.bits_helper > 0.0 && a.bits_ap > 0.0, "{a:?}");
}

#[test]
fn joint_report_is_consistent() {
    for (d, t, l) in [(120.0, 0.1, 2e4), (60.0, 0.05, 1e5), (200.0, 0.03, 3e4), (120.0, 0.1, 2e5)] {
        let s = Scenario::line_layout(d, t, l).unwrap();
        let r = solve_joint(&s).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal, "D={d} T={t} L={l}");
        assert!(validate_allocation(&r.allocation, &s, DEFAULT_TOLERANCE).is_feasible());
        let gap = r.energy.e_total_j - r.dual_value;
        assert!((gap - r.duality_gap).abs() <= 1e-15);
        assert!(gap.abs() <= 1e-6f64.max(1e-3 * r.energy.e_total_j));
        let sum = r.allocation.bits_local + r.allocation.bits_helper + r.allocation.bits_ap;
        assert!((sum - l).abs() <= 1e-9 * l);
    }
}

#[test]
fn joint_is_never_worse_than_a_benchmark() {
    for t in [0.02, 0.03, 0.05, 0.1] {
        for l in [1e4, 5e4, 1e5] {
            let s = Scenario::line_layout(120.0, t, l).unwrap();
            let joint = solve_joint(&s).unwrap().energy.e_total_j;
            for id in [SchemeId::Local, SchemeId::ComputationCoop, SchemeId::CommunicationCoop] {
                let b = run_scheme(id, &s).unwrap();
                if b.feasible {
                    assert!(joint <= b.energy_j + 1e-6, "{id:?} T={t} L={l}: {joint} > {}", b.energy_j);
                }
            }
        }
    }
}

#[test]
fn benchmarks_match_restricted_oracles() {
    let s = default_scenario();
    let grid = GridSpec::default();
    let comp = computation_coop(&s).unwrap();
    let no_ap = brute_force_restricted(&s, &grid, Restriction::NoAp).unwrap().unwrap();
    assert!(rel(comp.energy_j, no_ap.energy_j) <= 0.01);
    let comm = communication_coop(&s).unwrap();
    let no_helper = brute_force_restricted(&s, &grid, Restriction::NoHelper).unwrap().unwrap();
    assert!(rel(comm.energy_j, no_helper.energy_j) <= 0.01);

    let short = Scenario::line_layout(120.0, 0.02, 2e4).unwrap();
    let comm = communication_coop(&short).unwrap();
    let no_helper = brute_force_restricted(&short, &grid, Restriction::NoHelper).unwrap().unwrap();
    assert!(rel(comm.energy_j, no_helper.energy_j) <= 0.01);
}

#[test]
fn benchmark_pins_hold() {
    let s = Scenario::line_layout(120.0, 0.03, 4e4).unwrap();
    let comp = computation_coop(&s).unwrap().allocation;
    assert_eq!((comp.tau2_s, comp.tau3_s, comp.bits_ap), (0.0, 0.0, 0.0));
    let comm = communication_coop(&s).unwrap().allocation;
    assert_eq!((comm.tau1_s, comm.bits_helper), (0.0, 0.0));
}

#[test]
fn scheme_energies_are_monotone() {
    for id in SchemeId::ALL {
        let mut last = f64::INFINITY;
        for t in [0.02, 0.04, 0.06, 0.08, 0.1] {
            let e = run_scheme(id, &Scenario::line_layout(120.0, t, 3e4).unwrap()).unwrap().energy_j;
            assert!(e <= last * (1.0 + 1e-6), "{id:?} grows with T");
            last = e;
        }
        let mut last = 0.0;
        for l in [1e4, 2e4, 4e4, 8e4] {
            let e = run_scheme(id, &Scenario::line_layout(120.0, 0.1, l).unwrap()).unwrap().energy_j;
            assert!(e >= last * (1.0 - 1e-6), "{id:?} shrinks with L");
            last = e;
        }
    }
}

#[test]
fn dead_links_reduce_every_scheme_to_local() {
    let base = default_scenario();
    let s = Scenario { gain_user_helper: 1e-30, gain_user_ap: 1e-30, ..base };
    let local = local_only(&s).unwrap().energy_j;
    for r in [computation_coop(&s).unwrap(), communication_coop(&s).unwrap()] {
        assert!(rel(r.energy_j, local) <= 1e-9);
    }
}

#[test]
fn supportable_bits_match_sweep() {
    for (d, t) in [(120.0, 0.1), (60.0, 0.05), (200.0, 0.02), (240.0, 0.2)] {
        let s = Scenario::line_layout(d, t, 1.0).unwrap();
        let lp = max_supportable_bits(&s).unwrap().max_bits;
        let sweep = supportable_bits_sweep(&s, 200, 3).unwrap();
        assert!(sweep <= lp * (1.0 + 1e-9), "grid beat the LP at D={d}");
        assert!(rel(sweep, lp) <= 5e-3, "D={d} T={t}: {sweep} vs {lp}");
    }
}

#[test]
fn infeasible_task_is_reported_at_the_threshold() {
    let s = default_scenario();
    let max = max_supportable_bits(&s).unwrap().max_bits;
    let below = solve_joint(&Scenario { task_bits: max * (1.0 - 1e-3), ..s }).unwrap();
    assert_eq!(below.status, SolveStatus::Optimal);
    let above = solve_joint(&Scenario { task_bits: max * (1.0 + 1e-3), ..s }).unwrap();
    assert_eq!(above.status, SolveStatus::InfeasibleTask);
    assert_eq!(above.max_bits, max);
}

#[test]
fn empty_task_needs_no_iterations() {
    let r = solve_joint(&Scenario::line_layout(120.0, 0.1, 0.0).unwrap()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert_eq!(r.energy.e_total_j, 0.0);
}

#[test]
fn ellipsoid_converges_for_empty_task() {
    let s = Scenario::line_layout(120.0, 0.1, 0.0).unwrap();
    let out = ellipsoid_maximize(&s, &EllipsoidConfig::default()).unwrap();
    assert!(out.trace.converged);
    assert!(out.value.abs() <= 1e-9, "{}", out.value);
}

#[test]
fn ellipsoid_best_value_never_decreases() {
    let s = Scenario::line_layout(120.0, 0.03, 3e4).unwrap();
    let out = ellipsoid_maximize(&s, &EllipsoidConfig::default()).unwrap();
    assert!(out.trace.converged);
    assert!(out.trace.best_values.windows(2).all(|w| w[1] >= w[0]));
    assert!(out.dual.is_feasible());
}
