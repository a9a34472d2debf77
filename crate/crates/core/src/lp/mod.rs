//! Small dense linear programs and the two scheduling LPs built on them.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

mod programs;
mod simplex;

pub use programs::{max_supportable_bits, recover_primal, SupportableBits, LOCAL_BITS_BAND};

/// `minimize c·x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper`.
///
/// Lower bounds must be finite; upper bounds may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// A program over `objective.len()` nonnegative, unbounded-above variables.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            a_eq: Vec::new(),
            b_eq: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    /// Adds `row · x <= rhs`.
    pub fn le(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    /// Adds `row · x >= rhs`.
    pub fn ge(self, row: Vec<f64>, rhs: f64) -> Self {
        let neg = row.into_iter().map(|v| -v).collect();
        self.le(neg, -rhs)
    }

    /// Adds `row · x = rhs`.
    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    /// Sets the bounds of variable `var`.
    pub fn bounds(mut self, var: usize, lower: f64, upper: f64) -> Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 {
            return Err(Error::MalformedLp("no variables"));
        }
        if self.a_ub.len() != self.b_ub.len() || self.a_eq.len() != self.b_eq.len() {
            return Err(Error::MalformedLp("row and right-hand-side counts differ"));
        }
        if self.a_ub.iter().chain(&self.a_eq).any(|r| r.len() != n) {
            return Err(Error::MalformedLp("row width differs from variable count"));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedLp("bound vectors differ from variable count"));
        }
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            if !lo.is_finite() || hi.is_nan() || lo > hi {
                return Err(Error::MalformedLp("bounds must satisfy finite lower <= upper"));
            }
        }
        let finite = |v: &f64| v.is_finite();
        if !(self.objective.iter().all(finite)
            && self.b_ub.iter().all(finite)
            && self.b_eq.iter().all(finite)
            && self.a_ub.iter().chain(&self.a_eq).flatten().all(finite))
        {
            return Err(Error::MalformedLp("non-finite coefficient"));
        }
        Ok(())
    }

    /// Whether `x` meets every row and bound within `tol * (1 + |b|)`.
    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        let dot = |a: &[f64]| a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>();
        let ub = self.a_ub.iter().zip(&self.b_ub).all(|(a, &b)| dot(a) <= b + tol * (1.0 + b.abs()));
        let eq = self.a_eq.iter().zip(&self.b_eq).all(|(a, &b)| (dot(a) - b).abs() <= tol * (1.0 + b.abs()));
        let bounds = x
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v >= lo - tol * (1.0 + lo.abs()) && v <= hi + tol * (1.0 + hi.abs()));
        ub && eq && bounds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; NaN unless `status` is optimal.
    pub x: Vec<f64>,
    pub value: f64,
}

impl LpSolution {
    fn infeasible(n: usize) -> Self {
        LpSolution { status: LpStatus::Infeasible, x: vec![f64::NAN; n], value: f64::INFINITY }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `lp`. Deterministic for identical input.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    simplex::solve(lp)
}
