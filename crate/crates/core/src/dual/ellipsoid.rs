//! Central-cut ellipsoid method for maximizing the dual function.

use alloc::vec::Vec;

use super::{eval_dual, DualEvaluation, DualPoint, DIM};
use crate::math::sqrt;
use crate::model::Scenario;
use crate::Result;

/// Settings of the ellipsoid iteration. Multipliers live in the units of
/// the bit-rescaled scenario (`bit_unit` bits per unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidConfig {
    pub bit_unit: f64,
    pub center: [f64; DIM],
    pub radius: f64,
    pub eps_rel: f64,
    pub eps_abs: f64,
    pub max_iters: usize,
}

impl Default for EllipsoidConfig {
    fn default() -> Self {
        EllipsoidConfig {
            bit_unit: 1e6,
            center: [1.0; DIM],
            radius: 1e3,
            eps_rel: 1e-6,
            eps_abs: 1e-12,
            max_iters: 5000,
        }
    }
}

impl EllipsoidConfig {
    /// Same settings with both stopping tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        EllipsoidConfig { eps_rel: self.eps_rel / factor, eps_abs: self.eps_abs / factor, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidTrace {
    pub iterations: usize,
    pub converged: bool,
    /// Best dual value after each iteration that visited a feasible point.
    pub best_values: Vec<f64>,
    /// Final `sqrt(g' P g)` bound on the remaining improvement.
    pub final_bound: f64,
}

/// Result of [`ellipsoid_maximize`]; the dual point is in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidOutcome {
    pub dual: DualPoint,
    pub value: f64,
    /// Evaluation at the best point, on the SI scenario.
    pub evaluation: DualEvaluation,
    pub trace: EllipsoidTrace,
}

type Mat = [[f64; DIM]; DIM];

fn mat_vec(p: &Mat, g: &[f64; DIM]) -> [f64; DIM] {
    core::array::from_fn(|i| (0..DIM).map(|j| p[i][j] * g[j]).sum())
}

fn dot(a: &[f64; DIM], b: &[f64; DIM]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes the dual function over `lambda >= 0, mu1 >= 0`.
///
/// Infeasible centers get a cut along the violated coordinate; feasible ones
/// get an objective cut along the negated subgradient. Stops once the
/// ellipsoid bounds the remaining improvement by `eps_abs + eps_rel |g|`.
pub fn ellipsoid_maximize(scenario: &Scenario, config: &EllipsoidConfig) -> Result<EllipsoidOutcome> {
    scenario.validate()?;
    let scaled = scenario.rescale_bits(config.bit_unit);
    let n = DIM as f64;
    let expand = n * n / (n * n - 1.0);

    let mut x = config.center;
    let mut p: Mat = [[0.0; DIM]; DIM];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = config.radius * config.radius;
    }

    let mut best: Option<(DualPoint, DualEvaluation)> = None;
    let mut best_values = Vec::new();
    let mut converged = false;
    let mut final_bound = f64::INFINITY;
    let mut iterations = 0;

    while iterations < config.max_iters {
        iterations += 1;
        let point = DualPoint::from_array(x);
        let g: [f64; DIM] = if let Some(i) = (0..4).find(|&i| x[i] < 0.0) {
            let mut cut = [0.0; DIM];
            cut[i] = -1.0;
            cut
        } else {
            let eval = eval_dual(&point, &scaled)?;
            let value = eval.value;
            let sub = eval.subgradient;
            if best.as_ref().map_or(true, |(_, b)| value > b.value) {
                best = Some((point, eval));
            }
            best_values.push(best.as_ref().map_or(value, |(_, b)| b.value));
            let pg = mat_vec(&p, &sub);
            final_bound = sqrt(dot(&sub, &pg).max(0.0));
            if final_bound <= config.eps_abs + config.eps_rel * value.abs() {
                converged = true;
                break;
            }
            core::array::from_fn(|i| -sub[i])
        };

        let pg = mat_vec(&p, &g);
        let gpg = dot(&g, &pg);
        if !(gpg > 0.0) {
            // degenerate ellipsoid; nothing left to localize
            converged = best.is_some();
            break;
        }
        let scale = sqrt(gpg);
        let step: [f64; DIM] = core::array::from_fn(|i| pg[i] / scale);
        for i in 0..DIM {
            x[i] -= step[i] / (n + 1.0);
        }
        for i in 0..DIM {
            for j in 0..DIM {
                p[i][j] = expand * (p[i][j] - 2.0 / (n + 1.0) * step[i] * step[j]);
            }
        }
        for i in 0..DIM {
            for j in 0..i {
                let avg = 0.5 * (p[i][j] + p[j][i]);
                p[i][j] = avg;
                p[j][i] = avg;
            }
        }
    }

    let (point, _) = match best {
        Some(b) => b,
        None => {
            // never visited a feasible center; fall back to the origin
            let origin = DualPoint::default();
            let eval = eval_dual(&origin, &scaled)?;
            (origin, eval)
        }
    };
    let dual = point.from_scaled(config.bit_unit);
    let evaluation = eval_dual(&dual, scenario)?;
    Ok(EllipsoidOutcome {
        dual,
        value: evaluation.value,
        evaluation,
        trace: EllipsoidTrace { iterations, converged, best_values, final_bound },
    })
}
