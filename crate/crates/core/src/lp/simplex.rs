//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Every variable is shifted to a zero lower bound, finite upper bounds become
//! explicit rows, and each row is normalized to unit infinity-norm before the
//! tableau is built. Instances here have a handful of columns, so a full
//! tableau is both the simplest and the most predictable choice.

use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, LpSolution, LpStatus};
use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    Le,
    Ge,
    Eq,
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    cells: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.cells[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize, cost: &mut [f64]) {
        let width = self.cols + 1;
        let p = self.cells[row][col];
        for v in self.cells[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.cells[row].clone();
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for k in 0..width {
                    r[k] -= f * pivot_row[k];
                }
                r[col] = 0.0;
            }
        }
        let f = cost[col];
        if f != 0.0 {
            for k in 0..width {
                cost[k] -= f * pivot_row[k];
            }
            cost[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Runs Bland-rule pivots on `cost` (reduced costs, last entry holds
    /// minus the objective). Columns at or beyond `allowed` never enter.
    /// Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, cost: &mut [f64], allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..allowed).find(|&j| cost[j] < -COST_EPS) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.cells.len() {
                let a = self.cells[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((best, r)) => {
                            let tie = (ratio - r).abs() <= 1e-12 * (1.0 + r.abs());
                            if ratio < r && !tie || tie && self.basis[i] < self.basis[best] {
                                Some((i, ratio))
                            } else {
                                Some((best, r))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((row, _)) => self.pivot(row, enter, cost),
            }
        }
        Err(Error::Internal("simplex exceeded its pivot budget"))
    }
}

fn inf_norm(row: &[f64]) -> f64 {
    row.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check_shape()?;
    let n = lp.objective.len();

    // rows over the shifted variables x' = x - lower
    let mut rows: Vec<(Vec<f64>, f64, Sense)> = Vec::new();
    let shift = |a: &[f64], b: f64| b - a.iter().zip(&lp.lower).map(|(ai, li)| ai * li).sum::<f64>();
    for (a, &b) in lp.a_ub.iter().zip(&lp.b_ub) {
        rows.push((a.clone(), shift(a, b), Sense::Le));
    }
    for (a, &b) in lp.a_eq.iter().zip(&lp.b_eq) {
        rows.push((a.clone(), shift(a, b), Sense::Eq));
    }
    for j in 0..n {
        if lp.upper[j].is_finite() {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            rows.push((a, lp.upper[j] - lp.lower[j], Sense::Le));
        }
    }

    let mut kept: Vec<(Vec<f64>, f64, Sense)> = Vec::with_capacity(rows.len());
    for (mut a, mut b, mut sense) in rows {
        let norm = inf_norm(&a);
        if norm == 0.0 {
            let ok = match sense {
                Sense::Le => b >= -FEAS_EPS,
                Sense::Ge => b <= FEAS_EPS,
                Sense::Eq => b.abs() <= FEAS_EPS,
            };
            if !ok {
                return Ok(LpSolution::infeasible(n));
            }
            continue;
        }
        for v in a.iter_mut() {
            *v /= norm;
        }
        b /= norm;
        if b < 0.0 {
            for v in a.iter_mut() {
                *v = -*v;
            }
            b = -b;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        kept.push((a, b, sense));
    }

    let m = kept.len();
    let n_slack = kept.iter().filter(|r| r.2 != Sense::Eq).count();
    let n_art = kept.iter().filter(|r| r.2 != Sense::Le).count();
    let art_start = n + n_slack;
    let cols = art_start + n_art;

    let mut cells = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let (mut slack, mut art) = (n, art_start);
    for (i, (a, b, sense)) in kept.iter().enumerate() {
        cells[i][..n].copy_from_slice(a);
        cells[i][cols] = *b;
        match sense {
            Sense::Le => {
                cells[i][slack] = 1.0;
                basis[i] = slack;
                slack += 1;
            }
            Sense::Ge => {
                cells[i][slack] = -1.0;
                slack += 1;
                cells[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
            Sense::Eq => {
                cells[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
        }
    }
    let mut tab = Tableau { cells, basis, cols };

    // phase 1: minimize the sum of artificials
    if n_art > 0 {
        let mut cost = vec![0.0; cols + 1];
        for c in cost.iter_mut().take(cols).skip(art_start) {
            *c = 1.0;
        }
        for i in 0..m {
            if tab.basis[i] >= art_start {
                for k in 0..=cols {
                    cost[k] -= tab.cells[i][k];
                }
            }
        }
        tab.optimize(&mut cost, cols)?;
        let infeasibility = -cost[cols];
        if infeasibility > FEAS_EPS * (1.0 + m as f64) {
            return Ok(LpSolution::infeasible(n));
        }
        // drive remaining artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < tab.cells.len() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start)
                    .filter(|&j| tab.cells[i][j].abs() > 1e-9)
                    .max_by(|&a, &b| tab.cells[i][a].abs().total_cmp(&tab.cells[i][b].abs()));
                match col {
                    Some(j) => {
                        let mut dummy = vec![0.0; cols + 1];
                        tab.pivot(i, j, &mut dummy);
                    }
                    None => {
                        tab.cells.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // phase 2 over structural and slack columns
    let c_norm = inf_norm(&lp.objective).max(f64::MIN_POSITIVE);
    let mut cost = vec![0.0; cols + 1];
    for j in 0..n {
        cost[j] = lp.objective[j] / c_norm;
    }
    for i in 0..tab.cells.len() {
        let cb = cost[tab.basis[i]];
        if cb != 0.0 {
            for k in 0..=cols {
                cost[k] -= cb * tab.cells[i][k];
            }
        }
    }
    if !tab.optimize(&mut cost, art_start)? {
        return Ok(LpSolution { status: LpStatus::Unbounded, x: vec![f64::NAN; n], value: f64::NEG_INFINITY });
    }

    let mut x = lp.lower.clone();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] += tab.rhs(i).max(0.0);
        }
    }
    for j in 0..n {
        x[j] = x[j].clamp(lp.lower[j], lp.upper[j]);
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let solution = LpSolution { status: LpStatus::Optimal, x, value };
    if !lp.satisfied_by(&solution.x, 1e-8) {
        return Err(Error::LpAudit);
    }
    Ok(solution)
}
