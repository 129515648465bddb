//! Damped-Newton centering for the log-barrier method.

use super::constraint::Constraint;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub t: f64,
    pub barrier_value: f64,
    pub newton_decrement: f64,
}

pub struct CenterOutcome {
    pub iterations: usize,
    pub converged: bool,
}

/// Barrier objective `t * c_min.x - sum ln(-g_i)`; `+inf` outside the
/// strictly feasible region.
pub fn barrier_value(c_min: &[f64], t: f64, constraints: &[Constraint], x: &[f64]) -> f64 {
    let mut v = t * c_min.iter().zip(x).map(|(c, xi)| c * xi).sum::<f64>();
    for c in constraints {
        let g = c.kind.value(x);
        if !g.is_finite() || g >= 0.0 {
            return f64::INFINITY;
        }
        v -= (-g).ln();
    }
    v
}

fn solve_spd(mut h: DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let n = h.nrows();
    let base = (h.diagonal().iter().map(|d| d.abs()).sum::<f64>() / n as f64).max(1e-30);
    let mut ridge = 0.0;
    for attempt in 0..8 {
        if attempt > 0 {
            let add = base * 1e-12 * 100f64.powi(attempt);
            for i in 0..n {
                h[(i, i)] += add - ridge;
            }
            ridge = add;
        }
        if let Some(chol) = h.clone().cholesky() {
            return Some(chol.solve(rhs));
        }
    }
    None
}

/// Newton minimization of the barrier objective at fixed `t`, starting from a
/// strictly feasible `x`. Backtracking keeps every iterate strictly feasible,
/// so the barrier value never increases.
#[allow(clippy::too_many_arguments)]
pub fn center(
    c_min: &[f64],
    t: f64,
    constraints: &[Constraint],
    x: &mut Vec<f64>,
    newton_cap: usize,
    newton_tol: f64,
    armijo: f64,
    backtrack: f64,
    trace: Option<&mut Vec<TraceRow>>,
    iteration_base: usize,
) -> CenterOutcome {
    let n = x.len();
    let mut idx = Vec::new();
    let mut val = Vec::new();
    let mut trace = trace;

    for iter in 0..newton_cap {
        let mut grad = DVector::from_iterator(n, c_min.iter().map(|c| t * c));
        let mut hess = DMatrix::zeros(n, n);
        let mut phi0 = t * c_min.iter().zip(x.iter()).map(|(c, xi)| c * xi).sum::<f64>();
        for c in constraints {
            let g = c.kind.value(x);
            debug_assert!(g < 0.0, "centering left the interior: {} = {g}", c.label);
            phi0 -= (-g).ln();
            let inv = 1.0 / (-g);
            c.kind.grad(x, &mut idx, &mut val);
            for (i, v) in idx.iter().zip(&val) {
                grad[*i] += inv * v;
            }
            let w1 = inv * inv;
            for a in 0..idx.len() {
                let va = w1 * val[a];
                let ia = idx[a];
                for b in 0..idx.len() {
                    hess[(ia, idx[b])] += va * val[b];
                }
            }
            c.kind.add_hess(x, inv, &mut hess);
        }

        let step_dir = match solve_spd(hess, &(-&grad)) {
            Some(d) => d,
            None => {
                return CenterOutcome { iterations: iter, converged: false };
            }
        };
        let decrement_sq = -grad.dot(&step_dir);
        if let Some(rows) = trace.as_deref_mut() {
            rows.push(TraceRow {
                iteration: iteration_base + iter,
                t,
                barrier_value: phi0,
                newton_decrement: decrement_sq.max(0.0).sqrt(),
            });
        }
        if decrement_sq / 2.0 <= newton_tol {
            return CenterOutcome { iterations: iter + 1, converged: true };
        }

        let slope = grad.dot(&step_dir);
        let mut step = 1.0;
        let mut accepted = false;
        while step >= 1e-18 {
            let xt: Vec<f64> = x
                .iter()
                .zip(step_dir.iter())
                .map(|(xi, di)| xi + step * di)
                .collect();
            let phit = barrier_value(c_min, t, constraints, &xt);
            if phit.is_finite() && phit <= phi0 + armijo * step * slope {
                *x = xt;
                accepted = true;
                break;
            }
            step *= backtrack;
        }
        if !accepted {
            // No descent possible at floating-point resolution; the point is
            // as centered as it will get.
            return CenterOutcome { iterations: iter + 1, converged: decrement_sq / 2.0 <= 1e-7 };
        }
    }
    CenterOutcome { iterations: newton_cap, converged: false }
}
