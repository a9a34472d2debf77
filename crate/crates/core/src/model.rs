//! Physical system model: channels, rates, energies and constraint checks.
//!
//! All quantities are SI: bits, seconds, watts, joules, hertz. Functions are
//! unit-agnostic as long as they are used consistently, which the dual solver
//! exploits by running on a rescaled copy of the [`Scenario`] (see
//! [`Scenario::rescale_bits`]).

use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, cube};
use crate::{Error, Result};

/// Reference path loss of -60 dB.
pub const DEFAULT_BETA0: f64 = 1e-6;
/// Reference distance for the path-loss model, meters.
pub const DEFAULT_D0_M: f64 = 10.0;
/// Path-loss exponent.
pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 3.0;
/// User to AP distance of the default line layout, meters.
pub const DEFAULT_USER_AP_DISTANCE_M: f64 = 250.0;

/// Default feasibility tolerance, relative to the larger side of each inequality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Linear power gain `beta0 * (distance / d0)^-exponent`.
pub fn path_loss_gain(distance_m: f64, beta0: f64, d0_m: f64, exponent: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::Domain("distance must be positive"));
    }
    if !(beta0 > 0.0 && d0_m > 0.0 && exponent > 0.0) {
        return Err(Error::Domain("path-loss parameters must be positive"));
    }
    Ok(beta0 * math::powf(distance_m / d0_m, -exponent))
}

/// Converts a power level in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    math::powf(10.0, dbm / 10.0) * 1e-3
}

/// Converts a ratio in dB to a linear factor.
pub fn db_to_linear(db: f64) -> f64 {
    math::powf(10.0, db / 10.0)
}

/// Achievable rate `B log2(1 + P h / (Γ σ²))` in bits per second.
pub fn achievable_rate(
    power_w: f64,
    gain: f64,
    noise_w: f64,
    bandwidth_hz: f64,
    capacity_gap: f64,
) -> Result<f64> {
    if !(power_w >= 0.0) {
        return Err(Error::Domain("transmit power must be nonnegative"));
    }
    Ok(rate_unchecked(power_w, gain / (capacity_gap * noise_w), bandwidth_hz))
}

/// Power needed to push `bits` through a slot of `duration_s` seconds.
///
/// Inverse of [`achievable_rate`]: `(2^(bits/(duration B)) - 1) Γ σ² / h`.
/// Zero bits never need power, even over an empty slot.
pub fn invert_rate(
    bits: f64,
    duration_s: f64,
    gain: f64,
    noise_w: f64,
    bandwidth_hz: f64,
    capacity_gap: f64,
) -> Result<f64> {
    if !(bits >= 0.0) {
        return Err(Error::Domain("bits must be nonnegative"));
    }
    if bits == 0.0 {
        return Ok(0.0);
    }
    if !(duration_s > 0.0) {
        return Err(Error::InfinitePower);
    }
    Ok(invert_unchecked(bits / duration_s, gain / (capacity_gap * noise_w), bandwidth_hz))
}

/// Energy `κ c³ bits³ / window²` of computing `bits` at a constant CPU
/// frequency spread over `window_s` seconds.
pub fn compute_energy(bits: f64, window_s: f64, kappa: f64, cycles_per_bit: f64) -> Result<f64> {
    if !(bits >= 0.0) {
        return Err(Error::Domain("bits must be nonnegative"));
    }
    if bits == 0.0 {
        return Ok(0.0);
    }
    if !(window_s > 0.0) {
        return Err(Error::Domain("positive bits need a positive computing window"));
    }
    Ok(kappa * cube(cycles_per_bit * bits) / (window_s * window_s))
}

#[inline]
pub(crate) fn rate_unchecked(power_w: f64, snr_per_watt: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * math::log1p(power_w * snr_per_watt) / math::LN_2
}

#[inline]
pub(crate) fn invert_unchecked(rate_bps: f64, snr_per_watt: f64, bandwidth_hz: f64) -> f64 {
    math::expm1(rate_bps / bandwidth_hz * math::LN_2) / snr_per_watt
}

/// One of the three radio links of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// User → helper, received with the helper's noise.
    UserHelper,
    /// User → AP, received with the AP's noise.
    UserAp,
    /// Helper → AP, received with the AP's noise.
    HelperAp,
}

/// Physical and computational parameters of one problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub bandwidth_hz: f64,
    pub gain_user_helper: f64,
    pub gain_user_ap: f64,
    pub gain_helper_ap: f64,
    pub noise_helper_w: f64,
    pub noise_ap_w: f64,
    pub capacity_gap: f64,
    pub p_user_max_w: f64,
    pub p_helper_max_w: f64,
    pub cycles_per_bit_user: f64,
    pub cycles_per_bit_helper: f64,
    pub kappa_user: f64,
    pub kappa_helper: f64,
    pub f_user_max_hz: f64,
    pub f_helper_max_hz: f64,
    pub f_ap_max_hz: f64,
    pub block_length_s: f64,
    pub task_bits: f64,
}

impl Scenario {
    /// The evaluation setup: user and AP 250 m apart, helper on the line
    /// between them at `helper_distance_m` from the user, 1 MHz bandwidth,
    /// -70 dBm noise, 40 dBm power caps, 10³ cycles/bit, κ_u = 1e-27,
    /// κ_h = 0.3e-27 and CPU caps of 2, 3 and 5 GHz.
    pub fn line_layout(helper_distance_m: f64, block_length_s: f64, task_bits: f64) -> Result<Self> {
        if !(helper_distance_m > 0.0 && helper_distance_m < DEFAULT_USER_AP_DISTANCE_M) {
            return Err(Error::InvalidScenario("helper must sit strictly between user and AP"));
        }
        let gain = |d| path_loss_gain(d, DEFAULT_BETA0, DEFAULT_D0_M, DEFAULT_PATH_LOSS_EXPONENT);
        let noise = dbm_to_watts(-70.0);
        let p_max = dbm_to_watts(40.0);
        let scenario = Scenario {
            bandwidth_hz: 1e6,
            gain_user_helper: gain(helper_distance_m)?,
            gain_user_ap: gain(DEFAULT_USER_AP_DISTANCE_M)?,
            gain_helper_ap: gain(DEFAULT_USER_AP_DISTANCE_M - helper_distance_m)?,
            noise_helper_w: noise,
            noise_ap_w: noise,
            capacity_gap: 1.0,
            p_user_max_w: p_max,
            p_helper_max_w: p_max,
            cycles_per_bit_user: 1e3,
            cycles_per_bit_helper: 1e3,
            kappa_user: 1e-27,
            kappa_helper: 0.3e-27,
            f_user_max_hz: 2e9,
            f_helper_max_hz: 3e9,
            f_ap_max_hz: 5e9,
            block_length_s,
            task_bits,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.bandwidth_hz, "bandwidth must be positive"),
            (self.gain_user_helper, "user-helper gain must be positive"),
            (self.gain_user_ap, "user-AP gain must be positive"),
            (self.gain_helper_ap, "helper-AP gain must be positive"),
            (self.noise_helper_w, "helper noise must be positive"),
            (self.noise_ap_w, "AP noise must be positive"),
            (self.p_user_max_w, "user power cap must be positive"),
            (self.p_helper_max_w, "helper power cap must be positive"),
            (self.cycles_per_bit_user, "user cycles per bit must be positive"),
            (self.cycles_per_bit_helper, "helper cycles per bit must be positive"),
            (self.kappa_user, "user capacitance coefficient must be positive"),
            (self.kappa_helper, "helper capacitance coefficient must be positive"),
            (self.f_user_max_hz, "user CPU cap must be positive"),
            (self.f_helper_max_hz, "helper CPU cap must be positive"),
            (self.f_ap_max_hz, "AP CPU cap must be positive"),
            (self.block_length_s, "block length must be positive"),
        ];
        for (value, msg) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidScenario(msg));
            }
        }
        if !(self.capacity_gap >= 1.0 && self.capacity_gap.is_finite()) {
            return Err(Error::InvalidScenario("capacity gap must be at least 1"));
        }
        if !(self.task_bits >= 0.0 && self.task_bits.is_finite()) {
            return Err(Error::InvalidScenario("task bits must be nonnegative"));
        }
        Ok(())
    }

    /// Effective SNR per watt `h / (Γ σ²)` of a link.
    #[inline]
    pub fn snr_per_watt(&self, link: Link) -> f64 {
        let (gain, noise) = match link {
            Link::UserHelper => (self.gain_user_helper, self.noise_helper_w),
            Link::UserAp => (self.gain_user_ap, self.noise_ap_w),
            Link::HelperAp => (self.gain_helper_ap, self.noise_ap_w),
        };
        gain / (self.capacity_gap * noise)
    }

    /// Rate of `link` at `power_w` (assumed nonnegative).
    #[inline]
    pub fn rate(&self, link: Link, power_w: f64) -> f64 {
        rate_unchecked(power_w, self.snr_per_watt(link), self.bandwidth_hz)
    }

    /// Power that carries `bits` over `link` in `duration_s`; zero bits need
    /// no power and positive bits over an empty slot need infinite power.
    #[inline]
    pub fn power_for(&self, link: Link, bits: f64, duration_s: f64) -> f64 {
        if bits <= 0.0 {
            0.0
        } else if duration_s <= 0.0 {
            f64::INFINITY
        } else {
            invert_unchecked(bits / duration_s, self.snr_per_watt(link), self.bandwidth_hz)
        }
    }

    /// Power cap of the transmitter on `link`.
    pub fn power_cap(&self, link: Link) -> f64 {
        match link {
            Link::UserHelper | Link::UserAp => self.p_user_max_w,
            Link::HelperAp => self.p_helper_max_w,
        }
    }

    /// Most bits the user can compute locally within the block.
    pub fn local_bit_cap(&self) -> f64 {
        self.block_length_s * self.f_user_max_hz / self.cycles_per_bit_user
    }

    /// Helper's maximum computation rate, bits per second.
    pub fn helper_bit_rate_cap(&self) -> f64 {
        self.f_helper_max_hz / self.cycles_per_bit_helper
    }

    /// Local computing energy for `bits` over the whole block.
    pub fn local_energy(&self, bits: f64) -> f64 {
        let t = self.block_length_s;
        self.kappa_user * cube(self.cycles_per_bit_user * bits) / (t * t)
    }

    /// Helper computing energy for `bits` over a window of `window_s`.
    pub fn helper_energy(&self, bits: f64, window_s: f64) -> f64 {
        if bits <= 0.0 {
            return 0.0;
        }
        if window_s <= 0.0 {
            return f64::INFINITY;
        }
        self.kappa_helper * cube(self.cycles_per_bit_helper * bits) / (window_s * window_s)
    }

    /// The same instance with bits measured in units of `unit` bits.
    ///
    /// Bandwidth, AP throughput and task size shrink by `unit` while cycles
    /// per bit grow by it, so energies, times and powers are unchanged and
    /// every rate comes out in units per second.
    pub fn rescale_bits(&self, unit: f64) -> Self {
        Scenario {
            bandwidth_hz: self.bandwidth_hz / unit,
            cycles_per_bit_user: self.cycles_per_bit_user * unit,
            cycles_per_bit_helper: self.cycles_per_bit_helper * unit,
            f_ap_max_hz: self.f_ap_max_hz / unit,
            task_bits: self.task_bits / unit,
            ..*self
        }
    }
}

/// A candidate schedule.
///
/// The AP execution slot is not stored; it is always `bits_ap / f_ap_max_hz`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Allocation {
    pub tau1_s: f64,
    pub tau2_s: f64,
    pub tau3_s: f64,
    pub p1_w: f64,
    pub p2_w: f64,
    pub p3_w: f64,
    pub bits_local: f64,
    pub bits_helper: f64,
    pub bits_ap: f64,
}

impl Allocation {
    /// Everything computed at the user.
    pub fn local_only(task_bits: f64) -> Self {
        Allocation { bits_local: task_bits, ..Allocation::default() }
    }

    /// Duration of the AP execution slot.
    pub fn tau4_s(&self, scenario: &Scenario) -> f64 {
        self.bits_ap / scenario.f_ap_max_hz
    }

    fn slot_power(tau: f64, power: f64) -> f64 {
        if tau > 0.0 {
            power
        } else {
            0.0
        }
    }

    /// Bits deliverable to the helper in slot 1.
    pub fn helper_link_bits(&self, s: &Scenario) -> f64 {
        self.tau1_s * s.rate(Link::UserHelper, Self::slot_power(self.tau1_s, self.p1_w))
    }

    /// Bits the AP can decode from slots 2 and 3 combined.
    pub fn relay_sum_bits(&self, s: &Scenario) -> f64 {
        self.tau2_s * s.rate(Link::UserAp, Self::slot_power(self.tau2_s, self.p2_w))
            + self.tau3_s * s.rate(Link::HelperAp, Self::slot_power(self.tau3_s, self.p3_w))
    }

    /// Bits the helper can decode in slot 2.
    pub fn relay_first_hop_bits(&self, s: &Scenario) -> f64 {
        self.tau2_s * s.rate(Link::UserHelper, Self::slot_power(self.tau2_s, self.p2_w))
    }
}

/// Energy split of an allocation, joules.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    pub e_offload_1_j: f64,
    pub e_offload_2_j: f64,
    pub e_offload_3_j: f64,
    pub e_compute_user_j: f64,
    pub e_compute_helper_j: f64,
    pub e_total_j: f64,
}

/// Energy of `alloc` under `scenario`.
///
/// A slot of zero length contributes no energy whatever power it stores.
pub fn total_energy(alloc: &Allocation, scenario: &Scenario) -> Result<EnergyBreakdown> {
    let t = scenario.block_length_s;
    let offload = |tau: f64, p: f64| if tau > 0.0 { tau * p } else { 0.0 };
    let e_offload_1_j = offload(alloc.tau1_s, alloc.p1_w);
    let e_offload_2_j = offload(alloc.tau2_s, alloc.p2_w);
    let e_offload_3_j = offload(alloc.tau3_s, alloc.p3_w);
    let e_compute_user_j = compute_energy(
        alloc.bits_local,
        t,
        scenario.kappa_user,
        scenario.cycles_per_bit_user,
    )?;
    let e_compute_helper_j = compute_energy(
        alloc.bits_helper,
        t - alloc.tau1_s,
        scenario.kappa_helper,
        scenario.cycles_per_bit_helper,
    )?;
    let e_total_j =
        e_offload_1_j + e_offload_2_j + e_offload_3_j + e_compute_user_j + e_compute_helper_j;
    Ok(EnergyBreakdown {
        e_offload_1_j,
        e_offload_2_j,
        e_offload_3_j,
        e_compute_user_j,
        e_compute_helper_j,
        e_total_j,
    })
}

/// Constraints of the scheduling problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `l_u + l_h + l_a = L`.
    TaskPartition,
    /// `l_h <= tau1 r01(P1)`.
    HelperLink,
    /// `l_a <= tau2 r0(P2) + tau3 r1(P3)`.
    RelaySum,
    /// `l_a <= tau2 r01(P2)`.
    RelayFirstHop,
    /// `c_u l_u <= T f_u,max`.
    UserCpu,
    /// `c_h l_h <= (T - tau1) f_h,max`.
    HelperCpu,
    /// `tau1 + tau2 + tau3 + l_a / f_a,max <= T`.
    TimeBudget,
    /// `P1 <= P_u,max`.
    PowerSlot1,
    /// `P2 <= P_u,max`.
    PowerSlot2,
    /// `P3 <= P_h,max`.
    PowerSlot3,
    /// Nonnegativity of every variable and `tau_i <= T`.
    Box,
}

impl Constraint {
    pub fn label(self) -> &'static str {
        match self {
            Constraint::TaskPartition => "task partition l_u + l_h + l_a = L",
            Constraint::HelperLink => "helper offload l_h <= tau1 r01(P1)",
            Constraint::RelaySum => "relay l_a <= tau2 r0(P2) + tau3 r1(P3)",
            Constraint::RelayFirstHop => "relay l_a <= tau2 r01(P2)",
            Constraint::UserCpu => "user CPU c_u l_u <= T f_u,max",
            Constraint::HelperCpu => "helper CPU c_h l_h <= (T - tau1) f_h,max",
            Constraint::TimeBudget => "time tau1 + tau2 + tau3 + l_a/f_a,max <= T",
            Constraint::PowerSlot1 => "power P1 <= P_u,max",
            Constraint::PowerSlot2 => "power P2 <= P_u,max",
            Constraint::PowerSlot3 => "power P3 <= P_h,max",
            Constraint::Box => "box 0 <= variables, tau_i <= T",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of one constraint check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintEntry {
    pub constraint: Constraint,
    /// Signed slack; negative means violated. Equalities report `-|lhs - rhs|`.
    pub slack: f64,
    pub satisfied: bool,
}

impl ConstraintEntry {
    pub fn label(&self) -> &'static str {
        self.constraint.label()
    }
}

/// Per-constraint audit of an allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub entries: Vec<ConstraintEntry>,
    pub tolerance: f64,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn get(&self, constraint: Constraint) -> Option<&ConstraintEntry> {
        self.entries.iter().find(|e| e.constraint == constraint)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConstraintEntry> {
        self.entries.iter().filter(|e| !e.satisfied)
    }
}

/// Checks `alloc` against every constraint of the problem.
///
/// Each inequality `lhs <= rhs` passes when `rhs - lhs >= -tolerance * max(|lhs|, |rhs|)`.
/// Infeasibility is reported, never raised.
pub fn validate_allocation(alloc: &Allocation, scenario: &Scenario, tolerance: f64) -> ConstraintReport {
    let s = scenario;
    let t = s.block_length_s;
    let mut entries = Vec::with_capacity(11);
    let le = |constraint, lhs: f64, rhs: f64| {
        let slack = rhs - lhs;
        let scale = lhs.abs().max(rhs.abs());
        ConstraintEntry { constraint, slack, satisfied: slack >= -tolerance * scale }
    };

    let partition = alloc.bits_local + alloc.bits_helper + alloc.bits_ap;
    let gap = (partition - s.task_bits).abs();
    let scale = partition.abs().max(s.task_bits);
    // equality scaled by its own sides rather than by the gap
    entries.push(ConstraintEntry { satisfied: gap <= tolerance * scale, ..le(Constraint::TaskPartition, gap, 0.0) });

    entries.push(le(Constraint::HelperLink, alloc.bits_helper, alloc.helper_link_bits(s)));
    entries.push(le(Constraint::RelaySum, alloc.bits_ap, alloc.relay_sum_bits(s)));
    entries.push(le(Constraint::RelayFirstHop, alloc.bits_ap, alloc.relay_first_hop_bits(s)));
    entries.push(le(Constraint::UserCpu, alloc.bits_local, s.local_bit_cap()));
    entries.push(le(Constraint::HelperCpu, alloc.bits_helper, (t - alloc.tau1_s) * s.helper_bit_rate_cap()));
    entries.push(le(
        Constraint::TimeBudget,
        alloc.tau1_s + alloc.tau2_s + alloc.tau3_s + alloc.tau4_s(s),
        t,
    ));
    entries.push(le(Constraint::PowerSlot1, alloc.p1_w, s.p_user_max_w));
    entries.push(le(Constraint::PowerSlot2, alloc.p2_w, s.p_user_max_w));
    entries.push(le(Constraint::PowerSlot3, alloc.p3_w, s.p_helper_max_w));

    let lows = [
        alloc.tau1_s,
        alloc.tau2_s,
        alloc.tau3_s,
        alloc.p1_w,
        alloc.p2_w,
        alloc.p3_w,
        alloc.bits_local,
        alloc.bits_helper,
        alloc.bits_ap,
    ];
    let worst_low = lows.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let worst_high = [alloc.tau1_s, alloc.tau2_s, alloc.tau3_s]
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(t - v));
    let box_slack = worst_low.min(worst_high);
    entries.push(ConstraintEntry {
        constraint: Constraint::Box,
        slack: box_slack,
        satisfied: worst_low >= 0.0 && worst_high >= -tolerance * t,
    });

    ConstraintReport { entries, tolerance }
}
