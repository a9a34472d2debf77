//! Brute-force reference minimizer.
//!
//! Searches the original (non-convexified) problem directly: a grid over the
//! three slot lengths, a grid over the bit partition, and for every candidate
//! the cheapest powers that carry the required bits. It shares no code with
//! the dual solver, so agreement between the two is a meaningful check.
//! Accuracy is limited by the grid; successive rounds zoom in around the
//! incumbent.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Allocation, Link, Scenario};
use crate::relay::{cheapest_relay, RelayPlan};
use crate::{Error, Result};

/// Resolution of the brute-force search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub tau1_points: usize,
    pub tau2_points: usize,
    pub tau3_points: usize,
    /// Points on each of the local and helper bit axes.
    pub bit_points: usize,
    /// Function evaluations of the broadcast-power line search.
    pub p2_points: usize,
    /// Zoom rounds after the initial grid; each shrinks every axis 5x.
    pub refinements: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { tau1_points: 25, tau2_points: 25, tau3_points: 25, bit_points: 40, p2_points: 60, refinements: 2 }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [self.tau1_points, self.tau2_points, self.tau3_points, self.bit_points, self.p2_points];
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::Domain("every grid axis needs at least two points"));
        }
        Ok(())
    }
}

/// Variables pinned to zero, for reproducing the single-cooperation
/// benchmarks with the same brute-force machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Restriction {
    #[default]
    None,
    /// `l_a = 0`, `tau2 = tau3 = 0`: local plus helper computing.
    NoAp,
    /// `l_h = 0`, `tau1 = 0`: local plus relayed AP offloading.
    NoHelper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub energy_j: f64,
    pub allocation: Allocation,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    step: f64,
    n: usize,
}

impl Axis {
    fn new(lo: f64, hi: f64, n: usize) -> Self {
        if n <= 1 || !(hi > lo) {
            return Axis { lo, step: 0.0, n: 1 };
        }
        Axis { lo, step: (hi - lo) / (n - 1) as f64, n }
    }

    fn fixed(v: f64) -> Self {
        Axis { lo: v, step: 0.0, n: 1 }
    }

    fn at(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    fn hi(&self) -> f64 {
        self.at(self.n - 1)
    }

    /// Axis of the same point count, `1/factor` as wide, centred on `center`
    /// and shifted to stay inside `[min, max]`.
    fn zoom(&self, center: f64, factor: f64, min: f64, max: f64) -> Self {
        if self.n == 1 {
            return *self;
        }
        let width = ((self.hi() - self.lo) / factor).min(max - min);
        let lo = (center - width / 2.0).max(min).min(max - width);
        Axis::new(lo, lo + width, self.n)
    }
}

struct Grid {
    tau: [Axis; 3],
    local: Axis,
    helper: Axis,
}

struct Search<'a> {
    s: &'a Scenario,
    spec: GridSpec,
    restriction: Restriction,
}

impl Search<'_> {
    fn local_cost(&self, bits: f64) -> f64 {
        if bits < 0.0 || bits > self.s.local_bit_cap() {
            f64::INFINITY
        } else {
            self.s.local_energy(bits)
        }
    }

    fn helper_cost(&self, tau1: f64, bits: f64) -> (f64, f64) {
        let s = self.s;
        let t = s.block_length_s;
        if bits <= 0.0 {
            return if bits == 0.0 { (0.0, 0.0) } else { (f64::INFINITY, 0.0) };
        }
        if tau1 <= 0.0 || tau1 >= t || bits > (t - tau1) * s.helper_bit_rate_cap() {
            return (f64::INFINITY, 0.0);
        }
        let p1 = s.power_for(Link::UserHelper, bits, tau1);
        if p1 > s.p_user_max_w {
            return (f64::INFINITY, 0.0);
        }
        (tau1 * p1 + s.helper_energy(bits, t - tau1), p1)
    }

    fn relay_cost(&self, tau2: f64, tau3: f64, bits: f64) -> Option<RelayPlan> {
        if bits < 0.0 {
            return None;
        }
        cheapest_relay(self.s, tau2, tau3, bits, self.spec.p2_points)
    }

    /// One pass over `grid`; returns the best candidate, earliest grid index
    /// winning ties.
    fn sweep(&self, grid: &Grid) -> Option<OracleResult> {
        let s = self.s;
        let t = s.block_length_s;
        let total = s.task_bits;
        let [ax1, ax2, ax3] = grid.tau;
        let (lu, lh) = (grid.local, grid.helper);
        let time_ok = |used: f64| used <= t * (1.0 + 1e-12);
        let snap = |bits: f64| if bits.abs() <= 1e-12 * total.max(1.0) { 0.0 } else { bits };

        let local: Vec<f64> = (0..lu.n).map(|i| self.local_cost(lu.at(i))).collect();
        let helper: Vec<Vec<(f64, f64)>> =
            (0..ax1.n).map(|a| (0..lh.n).map(|j| self.helper_cost(ax1.at(a), lh.at(j))).collect()).collect();

        // AP bits depend on (i, j) only through i + j when both bit axes share a step
        let shared_step = (lu.step - lh.step).abs() <= 1e-12 * lu.step.max(lh.step);
        let ap_bits = |i: usize, j: usize| snap(total - lu.at(i) - lh.at(j));
        let ap_index = |i: usize, j: usize| if shared_step { i + j } else { i * lh.n + j };
        let ap_count = if shared_step { lu.n + lh.n - 1 } else { lu.n * lh.n };
        let mut ap_values = vec![0.0; ap_count];
        for i in 0..lu.n {
            for j in 0..lh.n {
                ap_values[ap_index(i, j)] = ap_bits(i, j);
            }
        }
        let relay: Vec<Vec<Vec<Option<RelayPlan>>>> = (0..ax2.n)
            .map(|b| {
                (0..ax3.n)
                    .map(|c| ap_values.iter().map(|&la| self.relay_cost(ax2.at(b), ax3.at(c), la)).collect())
                    .collect()
            })
            .collect();

        let mut best: Option<(f64, [usize; 5])> = None;
        for a in 0..ax1.n {
            for b in 0..ax2.n {
                for c in 0..ax3.n {
                    let used = ax1.at(a) + ax2.at(b) + ax3.at(c);
                    if !time_ok(used) {
                        continue;
                    }
                    for i in 0..lu.n {
                        let e_local = local[i];
                        if !e_local.is_finite() {
                            continue;
                        }
                        for j in 0..lh.n {
                            let e_helper = helper[a][j].0;
                            let k = ap_index(i, j);
                            let la = ap_values[k];
                            if !e_helper.is_finite() || la < 0.0 || !time_ok(used + la / s.f_ap_max_hz) {
                                continue;
                            }
                            let Some(plan) = relay[b][c][k] else { continue };
                            let e = e_local + e_helper + plan.energy_j;
                            if best.map_or(true, |(be, _)| e < be) {
                                best = Some((e, [a, b, c, i, j]));
                            }
                        }
                    }
                }
            }
        }

        let (energy_j, [a, b, c, i, j]) = best?;
        let k = ap_index(i, j);
        let plan = relay[b][c][k].unwrap_or(RelayPlan { energy_j: 0.0, p2_w: 0.0, p3_w: 0.0 });
        let (tau1, tau2, tau3) = (ax1.at(a), ax2.at(b), ax3.at(c));
        let bits_helper = lh.at(j);
        let bits_ap = ap_values[k];
        let allocation = Allocation {
            tau1_s: if bits_helper > 0.0 { tau1 } else { 0.0 },
            tau2_s: if bits_ap > 0.0 { tau2 } else { 0.0 },
            tau3_s: if bits_ap > 0.0 && plan.p3_w > 0.0 { tau3 } else { 0.0 },
            p1_w: helper[a][j].1,
            p2_w: plan.p2_w,
            p3_w: plan.p3_w,
            bits_local: lu.at(i),
            bits_helper,
            bits_ap,
        };
        Some(OracleResult { energy_j, allocation })
    }

    fn initial_grid(&self) -> Grid {
        let t = self.s.block_length_s;
        let total = self.s.task_bits;
        let g = &self.spec;
        let tau = |n| Axis::new(0.0, t, n);
        let bits = Axis::new(0.0, total, g.bit_points);
        match self.restriction {
            Restriction::None => Grid {
                tau: [tau(g.tau1_points), tau(g.tau2_points), tau(g.tau3_points)],
                local: bits,
                helper: bits,
            },
            Restriction::NoAp => Grid {
                tau: [tau(g.tau1_points), Axis::fixed(0.0), Axis::fixed(0.0)],
                local: bits,
                helper: Axis::fixed(0.0),
            },
            Restriction::NoHelper => Grid {
                tau: [Axis::fixed(0.0), tau(g.tau2_points), tau(g.tau3_points)],
                local: bits,
                helper: Axis::fixed(0.0),
            },
        }
    }

    /// Adjusts a grid for restrictions where one bit variable is implied.
    fn candidates(&self, grid: &Grid) -> Option<OracleResult> {
        match self.restriction {
            Restriction::None | Restriction::NoHelper => self.sweep(grid),
            Restriction::NoAp => self.sweep_no_ap(grid),
        }
    }

    /// `l_h = L - l_u`, no AP offload.
    fn sweep_no_ap(&self, grid: &Grid) -> Option<OracleResult> {
        let s = self.s;
        let total = s.task_bits;
        let [ax1, _, _] = grid.tau;
        let mut best: Option<OracleResult> = None;
        for a in 0..ax1.n {
            for i in 0..grid.local.n {
                let lu = grid.local.at(i);
                let lh = (total - lu).max(0.0);
                let e_local = self.local_cost(lu);
                let (e_helper, p1) = self.helper_cost(ax1.at(a), lh);
                let e = e_local + e_helper;
                if e.is_finite() && best.map_or(true, |b| e < b.energy_j) {
                    let allocation = Allocation {
                        tau1_s: if lh > 0.0 { ax1.at(a) } else { 0.0 },
                        p1_w: p1,
                        bits_local: lu,
                        bits_helper: lh,
                        ..Allocation::default()
                    };
                    best = Some(OracleResult { energy_j: e, allocation });
                }
            }
        }
        best
    }

    fn run(&self) -> Option<OracleResult> {
        let t = self.s.block_length_s;
        let total = self.s.task_bits;
        let mut grid = self.initial_grid();
        let mut best = self.candidates(&grid)?;
        for _ in 0..self.spec.refinements {
            let a = &best.allocation;
            // an unused slot keeps its last grid center
            let center = |axis: &Axis, v: f64| if axis.n == 1 { axis.lo } else { v };
            grid = Grid {
                tau: [
                    grid.tau[0].zoom(center(&grid.tau[0], a.tau1_s), 5.0, 0.0, t),
                    grid.tau[1].zoom(center(&grid.tau[1], a.tau2_s), 5.0, 0.0, t),
                    grid.tau[2].zoom(center(&grid.tau[2], a.tau3_s), 5.0, 0.0, t),
                ],
                local: grid.local.zoom(a.bits_local, 5.0, 0.0, total),
                helper: grid.helper.zoom(a.bits_helper, 5.0, 0.0, total),
            };
            if let Some(found) = self.candidates(&grid) {
                if found.energy_j < best.energy_j {
                    best = found;
                }
            }
        }
        Some(best)
    }
}

/// Brute-force minimum energy of the full problem. `Ok(None)` when no grid
/// point is feasible at this resolution.
pub fn brute_force_min_energy(scenario: &Scenario, grid: &GridSpec) -> Result<Option<OracleResult>> {
    brute_force_restricted(scenario, grid, Restriction::None)
}

/// [`brute_force_min_energy`] with some variables pinned to zero.
pub fn brute_force_restricted(
    scenario: &Scenario,
    grid: &GridSpec,
    restriction: Restriction,
) -> Result<Option<OracleResult>> {
    scenario.validate()?;
    grid.validate()?;
    if scenario.task_bits == 0.0 {
        return Ok(Some(OracleResult { energy_j: 0.0, allocation: Allocation::default() }));
    }
    Ok(Search { s: scenario, spec: *grid, restriction }.run())
}

/// Largest supportable task by direct enumeration, independent of the LP.
///
/// All radios and CPUs run flat out. For each `tau1` on a grid, the relay
/// balance fixes `tau3 = q tau2` and the leftover block time goes to AP
/// computing, which must not outrun the relay: that confines `tau2` to a
/// narrow interval, swept on an inner grid with both ends included. Each
/// refinement round zooms 5x around the best `tau1`.
pub fn supportable_bits_sweep(scenario: &Scenario, points: usize, refinements: usize) -> Result<f64> {
    scenario.validate()?;
    if points < 2 {
        return Err(Error::Domain("every grid axis needs at least two points"));
    }
    let s = scenario;
    let t = s.block_length_s;
    let r01 = s.rate(Link::UserHelper, s.p_user_max_w);
    let r0 = s.rate(Link::UserAp, s.p_user_max_w);
    let r1 = s.rate(Link::HelperAp, s.p_helper_max_w);
    let q = (r01 - r0) / r1;
    let local = s.local_bit_cap();
    let slack = 1e-12;

    let bits_at = |tau1: f64, tau2: f64| -> f64 {
        let helper = (t - tau1) * s.helper_bit_rate_cap();
        let left = t - tau1 - tau2 * (1.0 + q);
        let ap = left.max(0.0) * s.f_ap_max_hz;
        let ok = helper <= tau1 * r01 * (1.0 + slack) && left >= -slack * t && ap <= tau2 * r01 * (1.0 + slack);
        if ok {
            local + helper + ap
        } else {
            f64::NEG_INFINITY
        }
    };
    let best_for = |tau1: f64| -> f64 {
        if q < 0.0 {
            // the direct link outruns the helper; only tau2 = 0 balances
            return bits_at(tau1, 0.0);
        }
        let rest = t - tau1;
        let inner = Axis::new(rest / (1.0 + q + r01 / s.f_ap_max_hz), rest / (1.0 + q), points);
        (0..inner.n).map(|b| bits_at(tau1, inner.at(b))).fold(f64::NEG_INFINITY, f64::max)
    };

    let mut axis = Axis::new(0.0, t, points);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for round in 0..=refinements {
        if round > 0 {
            axis = axis.zoom(best.1, 5.0, 0.0, t);
        }
        for a in 0..axis.n {
            let v = best_for(axis.at(a));
            if v > best.0 {
                best = (v, axis.at(a));
            }
        }
    }
    if best.0.is_finite() {
        Ok(best.0)
    } else {
        Err(Error::Internal("no grid point satisfies the full-power equalities"))
    }
}
