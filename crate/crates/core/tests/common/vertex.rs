//! Exhaustive vertex enumeration for tiny box-bounded LPs.
//!
//! Every choice of `n` active constraints (equalities always active) gives a
//! candidate vertex; the cheapest feasible one is the optimum. Exponential,
//! but exact and entirely independent of the simplex code.

use coopmec_core::lp::LinearProgram;

/// Optimal value, or `None` when no vertex is feasible. Requires finite
/// bounds on every variable.
pub fn enumerate_optimum(lp: &LinearProgram, tol: f64) -> Option<f64> {
    let n = lp.objective.len();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, &b) in lp.a_ub.iter().zip(&lp.b_ub) {
        planes.push((row.clone(), b));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), lp.lower[j]));
        planes.push((e, lp.upper[j]));
    }
    let eqs: Vec<(Vec<f64>, f64)> = lp.a_eq.iter().cloned().zip(lp.b_eq.iter().copied()).collect();
    if eqs.len() > n {
        return None;
    }
    let free = n - eqs.len();

    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(free);
    combos(planes.len(), free, 0, &mut pick, &mut |chosen| {
        let mut rows: Vec<(Vec<f64>, f64)> = eqs.clone();
        rows.extend(chosen.iter().map(|&i| planes[i].clone()));
        let Some(x) = solve_square(rows) else { return };
        if !feasible(lp, &x, tol) {
            return;
        }
        let v: f64 = lp.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
        if best.map_or(true, |b| v < b) {
            best = Some(v);
        }
    });
    best
}

fn combos(m: usize, k: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..m {
        pick.push(i);
        combos(m, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(mut rows: Vec<(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let n = rows.len();
    for col in 0..n {
        let p = (col..n).max_by(|&a, &b| rows[a].0[col].abs().total_cmp(&rows[b].0[col].abs()))?;
        if rows[p].0[col].abs() < 1e-12 {
            return None;
        }
        rows.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = rows[r].0[col] / rows[col].0[col];
                let (pivot_row, pivot_rhs) = rows[col].clone();
                for (a, b) in rows[r].0.iter_mut().zip(&pivot_row) {
                    *a -= f * b;
                }
                rows[r].1 -= f * pivot_rhs;
            }
        }
    }
    Some((0..n).map(|i| rows[i].1 / rows[i].0[i]).collect())
}

fn feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    lp.a_ub.iter().zip(&lp.b_ub).all(|(r, &b)| dot(r) <= b + tol * (1.0 + b.abs()))
        && lp.a_eq.iter().zip(&lp.b_eq).all(|(r, &b)| (dot(r) - b).abs() <= tol * (1.0 + b.abs()))
        && x.iter().zip(lp.lower.iter().zip(&lp.upper)).all(|(&v, (&lo, &hi))| v >= lo - tol && v <= hi + tol)
}
