//! One-dimensional minimization for convex (hence unimodal) objectives.
//!
//! Infeasible points are expressed as `f64::INFINITY`; the objectives handed
//! in are convex on an interval and infinite outside it.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]` using `evals` function evaluations.
/// Returns the best point seen, endpoints included.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, evals: usize) -> (f64, f64) {
    let mut best = (lo, f(lo));
    let f_hi = f(hi);
    if f_hi < best.1 {
        best = (hi, f_hi);
    }
    if !(hi > lo) || evals < 2 {
        return best;
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 2..evals {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Uniform scan with `points` samples followed by golden-section search in
/// the bracket around the best sample.
pub(crate) fn scan_then_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    evals: usize,
) -> (f64, f64) {
    let points = points.max(2);
    if !(hi > lo) {
        return (lo, f(lo));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| if i + 1 == points { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best = (lo, f(lo));
    for i in 1..points {
        let x = at(i);
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
            best_i = i;
        }
    }
    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(points - 1));
    let refined = golden_min(&mut f, a, b, evals);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}
