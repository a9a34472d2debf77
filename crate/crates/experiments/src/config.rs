//! Experiment configuration.
//!
//! Plain `key = value` lines grouped under `[section]` headers, `#` for
//! comments (a TOML subset). Every key is optional and defaults to the
//! evaluation setup. Human units (MHz, GHz, dBm, dB, Mbits) are converted to
//! SI when a [`Scenario`] is built.
//!
//! ```text
//! [task]
//! block_length_s = 0.1
//! task_mbits = 0.02
//!
//! [sweep]
//! variable = "T"      # T, L or D
//! start = 0.02
//! stop = 0.1
//! step = 0.01
//!
//! [run]
//! schemes = ["local", "computation_coop", "communication_coop", "joint"]
//! output = "sweep.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use coopmec_core::model::{db_to_linear, dbm_to_watts, path_loss_gain};
use coopmec_core::schemes::SchemeId;
use coopmec_core::Scenario;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Layout {
    pub user_ap_distance_m: f64,
    /// Helper position on the user-AP line, measured from the user.
    pub helper_distance_m: f64,
}

impl Default for Layout {
    fn default() -> Self {
        Layout { user_ap_distance_m: 250.0, helper_distance_m: 120.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathLoss {
    pub beta0_db: f64,
    pub d0_m: f64,
    pub exponent: f64,
}

impl Default for PathLoss {
    fn default() -> Self {
        PathLoss { beta0_db: -60.0, d0_m: 10.0, exponent: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Radio {
    pub bandwidth_mhz: f64,
    pub noise_dbm: f64,
    pub capacity_gap_db: f64,
}

impl Default for Radio {
    fn default() -> Self {
        Radio { bandwidth_mhz: 1.0, noise_dbm: -70.0, capacity_gap_db: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Device {
    pub kappa_user: f64,
    pub kappa_helper: f64,
    pub cycles_per_bit_user: f64,
    pub cycles_per_bit_helper: f64,
    pub f_user_max_ghz: f64,
    pub f_helper_max_ghz: f64,
    pub f_ap_max_ghz: f64,
    pub p_user_max_dbm: f64,
    pub p_helper_max_dbm: f64,
}

impl Default for Device {
    fn default() -> Self {
        Device {
            kappa_user: 1e-27,
            kappa_helper: 0.3e-27,
            cycles_per_bit_user: 1e3,
            cycles_per_bit_helper: 1e3,
            f_user_max_ghz: 2.0,
            f_helper_max_ghz: 3.0,
            f_ap_max_ghz: 5.0,
            p_user_max_dbm: 40.0,
            p_helper_max_dbm: 40.0,
        }
    }
}

/// Values used for whichever quantities are not being swept.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Task {
    pub block_length_s: f64,
    pub task_mbits: f64,
}

impl Default for Task {
    fn default() -> Self {
        Task { block_length_s: 0.1, task_mbits: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepVariable {
    /// Block length, seconds.
    T,
    /// Task size, Mbits.
    L,
    /// Helper distance from the user, meters.
    D,
}

impl SweepVariable {
    /// CSV column name.
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::T => "block_length_s",
            SweepVariable::L => "task_mbits",
            SweepVariable::D => "helper_distance_m",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::T => "T",
            SweepVariable::L => "L",
            SweepVariable::D => "D",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep { variable: SweepVariable::T, start: 0.02, stop: 0.1, step: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Run {
    pub schemes: Vec<String>,
    pub output: Option<PathBuf>,
    /// Reserved; every computation here is deterministic.
    pub seed: u64,
    /// Relative stopping tolerance of the ellipsoid method.
    pub tolerance: Option<f64>,
    /// Communication benchmark lets the relay slots fill the whole block,
    /// ignoring the AP's computing time.
    pub relay_whole_block: bool,
}

impl Default for Run {
    fn default() -> Self {
        Run {
            schemes: SchemeId::ALL.iter().map(|id| id.as_str().to_string()).collect(),
            output: None,
            seed: 0,
            tolerance: None,
            relay_whole_block: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub layout: Layout,
    pub path_loss: PathLoss,
    pub radio: Radio,
    pub device: Device,
    pub task: Task,
    pub sweep: Sweep,
    pub run: Run,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.sweep;
        if !(s.step > 0.0 && s.start.is_finite() && s.stop.is_finite()) {
            return invalid("sweep step must be positive and bounds finite");
        }
        if s.stop < s.start {
            return invalid("sweep range is empty");
        }
        self.schemes()?;
        if let Some(tol) = self.run.tolerance {
            if !(tol > 0.0 && tol < 1.0) {
                return invalid("tolerance must lie in (0, 1)");
            }
        }
        for value in self.sweep_values() {
            self.build_scenario(value)?;
        }
        Ok(())
    }

    /// Requested schemes in canonical order, duplicates removed.
    pub fn schemes(&self) -> Result<Vec<SchemeId>, ConfigError> {
        let mut ids = Vec::new();
        for name in &self.run.schemes {
            match SchemeId::parse(name.trim()) {
                Some(id) => ids.push(id),
                None => return invalid(format!("unknown scheme {name:?}")),
            }
        }
        ids.sort();
        ids.dedup();
        Ok(ids)
    }

    /// Sweep points from `start` to `stop` inclusive. Each point is computed
    /// from its index, so no rounding accumulates.
    pub fn sweep_values(&self) -> Vec<f64> {
        let s = &self.sweep;
        let count = ((s.stop - s.start) / s.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| s.start + s.step * i as f64).collect()
    }

    /// Scenario at one sweep point.
    pub fn build_scenario(&self, sweep_value: f64) -> Result<Scenario, ConfigError> {
        let mut block_length_s = self.task.block_length_s;
        let mut task_mbits = self.task.task_mbits;
        let mut helper_distance_m = self.layout.helper_distance_m;
        match self.sweep.variable {
            SweepVariable::T => block_length_s = sweep_value,
            SweepVariable::L => task_mbits = sweep_value,
            SweepVariable::D => helper_distance_m = sweep_value,
        }
        let span = self.layout.user_ap_distance_m;
        if !(helper_distance_m > 0.0 && helper_distance_m < span) {
            return invalid(format!("helper distance {helper_distance_m} m must lie strictly between 0 and {span} m"));
        }
        let pl = &self.path_loss;
        let gain = |d: f64| {
            path_loss_gain(d, db_to_linear(pl.beta0_db), pl.d0_m, pl.exponent)
                .map_err(|e| ConfigError::Invalid(format!("path loss: {e}")))
        };
        let dev = &self.device;
        let noise = dbm_to_watts(self.radio.noise_dbm);
        let scenario = Scenario {
            bandwidth_hz: self.radio.bandwidth_mhz * 1e6,
            gain_user_helper: gain(helper_distance_m)?,
            gain_user_ap: gain(span)?,
            gain_helper_ap: gain(span - helper_distance_m)?,
            noise_helper_w: noise,
            noise_ap_w: noise,
            capacity_gap: db_to_linear(self.radio.capacity_gap_db),
            p_user_max_w: dbm_to_watts(dev.p_user_max_dbm),
            p_helper_max_w: dbm_to_watts(dev.p_helper_max_dbm),
            cycles_per_bit_user: dev.cycles_per_bit_user,
            cycles_per_bit_helper: dev.cycles_per_bit_helper,
            kappa_user: dev.kappa_user,
            kappa_helper: dev.kappa_helper,
            f_user_max_hz: dev.f_user_max_ghz * 1e9,
            f_helper_max_hz: dev.f_helper_max_ghz * 1e9,
            f_ap_max_hz: dev.f_ap_max_ghz * 1e9,
            block_length_s,
            task_bits: task_mbits * 1e6,
        };
        scenario.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_line_layout() {
        let c = ExperimentConfig::default();
        let s = c.build_scenario(0.1).unwrap();
        let reference = Scenario::line_layout(120.0, 0.1, 2e4).unwrap();
        for (a, b) in [
            (s.gain_user_helper, reference.gain_user_helper),
            (s.gain_helper_ap, reference.gain_helper_ap),
            (s.gain_user_ap, reference.gain_user_ap),
            (s.noise_ap_w, 1e-10),
            (s.p_user_max_w, 10.0),
            (s.task_bits, 2e4),
        ] {
            assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
        }
        assert!((s.gain_user_helper - 5.787e-10).abs() < 1e-12);
        assert!((s.gain_helper_ap - 4.552e-10).abs() < 1e-12);
        assert!((s.gain_user_ap - 6.4e-11).abs() < 1e-15);
    }

    #[test]
    fn sweep_points_include_both_ends() {
        let c = ExperimentConfig::default();
        let v = c.sweep_values();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], 0.02);
        assert!((v[8] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sections_and_comments_parse() {
        let c = ExperimentConfig::parse(
            "# task-size sweep\n[sweep]\nvariable = \"L\" # Mbits\nstart = 0.01\nstop = 0.1\nstep = 0.01\n\n[run]\nschemes = [\"joint\", \"local\"]\n",
        )
        .unwrap();
        assert_eq!(c.sweep.variable, SweepVariable::L);
        assert_eq!(c.schemes().unwrap(), vec![SchemeId::Local, SchemeId::Joint]);
        assert_eq!(c.build_scenario(0.05).unwrap().task_bits, 5e4);
    }

    #[test]
    fn bad_configs_are_rejected() {
        for text in [
            "[sweep]\nstart = 0.1\nstop = 0.05\n",
            "[sweep]\nstep = 0\n",
            "[layout]\nhelper_distance_m = 300\n",
            "[sweep]\nvariable = \"D\"\nstart = 100\nstop = 260\nstep = 10\n",
            "[run]\nschemes = [\"cloud\"]\n",
            "[radio]\nbandwith_mhz = 1\n",
            "[task]\nblock_length_s = -1\n[sweep]\nvariable = \"L\"\n",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
    }
}
