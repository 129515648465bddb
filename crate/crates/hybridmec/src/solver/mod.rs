//! Phase-I / phase-II log-barrier interior-point solver for one convex
//! subproblem, with KKT certification.
//!
//! The problem form is `maximize c._x` subject to tagged convex constraints
//! `g_i(x) <= 0` (see [`constraint::ConstraintKind`]). The barrier method
//! minimizes `-c.x + (1/t) sum -log(-g_i)` over strictly feasible points,
//! re-centering with damped Newton steps while `t` grows geometrically.
//! Dense linear algebra throughout: subproblem dimensions stay in the
//! hundreds.

pub mod constraint;
mod newton;

pub use constraint::{Constraint, ConstraintKind, RankTwo, ScaPair};
pub use newton::TraceRow;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("malformed subproblem: {0}")]
    Structural(String),
}

/// Named variable block of a subproblem, for inspection and state mapping.
#[derive(Debug, Clone, Serialize)]
pub struct VarBlock {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

/// Assembled constraint system of one convex subproblem.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexSubproblem {
    pub num_vars: usize,
    /// Linear objective, to be maximized.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub blocks: Vec<VarBlock>,
    /// Suggested start; `solve` falls back to phase I when it is not
    /// strictly feasible.
    pub initial_point: Vec<f64>,
}

impl ConvexSubproblem {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.objective.len() != self.num_vars || self.initial_point.len() != self.num_vars {
            return Err(SolverError::Structural(format!(
                "objective/initial point sized {}/{} for {} variables",
                self.objective.len(),
                self.initial_point.len(),
                self.num_vars
            )));
        }
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for c in &self.constraints {
            c.kind.grad(&self.initial_point, &mut idx, &mut val);
            if let Some(&bad) = idx.iter().find(|&&i| i >= self.num_vars) {
                return Err(SolverError::Structural(format!(
                    "constraint {} references variable {bad} of {}",
                    c.label, self.num_vars
                )));
            }
        }
        Ok(())
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.kind.value(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_strictly_feasible(&self, x: &[f64], margin: f64) -> bool {
        self.constraints.iter().all(|c| {
            let g = c.kind.value(x);
            g.is_finite() && g < -margin
        })
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, xi)| c * xi).sum()
    }

    /// Solver-independent JSON view of the constraint system.
    pub fn dump(&self) -> serde_json::Value {
        serde_json::json!({
            "num_vars": self.num_vars,
            "blocks": self.blocks,
            "constraints": self.constraints.iter().map(|c| serde_json::json!({
                "label": c.label,
                "tag": c.kind.tag(),
                "domain_guard": c.domain_guard,
                "kind": c.kind,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct SolverSolution {
    pub x: Vec<f64>,
    /// Objective in maximize form.
    pub objective: f64,
    /// Maximum constraint value at `x`; negative means strictly feasible.
    pub max_violation: f64,
    pub stationarity: f64,
    pub complementarity: f64,
    pub duals: Vec<f64>,
    pub newton_iterations: usize,
    pub centerings: usize,
    pub t_final: f64,
    pub status: SolveStatus,
    pub trace: Vec<TraceRow>,
}

impl SolverSolution {
    /// Writes the iteration trace as CSV: iteration, t, barrier value,
    /// Newton decrement.
    pub fn write_trace_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iteration,t,barrier_value,newton_decrement")?;
        for row in &self.trace {
            writeln!(
                w,
                "{},{},{},{}",
                row.iteration, row.t, row.barrier_value, row.newton_decrement
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub t_init: f64,
    pub t_factor: f64,
    /// Stop once the duality-gap bound satisfies `m/t < gap_rel * m`.
    pub gap_rel: f64,
    pub newton_cap: usize,
    /// Exit threshold on the squared Newton decrement / 2.
    pub newton_tol: f64,
    pub armijo: f64,
    pub backtrack: f64,
    /// Strictness margin when accepting a provided start without phase I.
    pub eps_feas: f64,
    /// Phase-I early exit: stop once every relaxed constraint is below
    /// `-phase1_exit`.
    pub phase1_exit: f64,
    pub collect_trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            t_init: 1.0,
            t_factor: 10.0,
            gap_rel: 1e-7,
            newton_cap: 50,
            newton_tol: 1e-13,
            armijo: 0.25,
            backtrack: 0.5,
            eps_feas: 1e-12,
            phase1_exit: 1e-6,
            collect_trace: false,
        }
    }
}

pub enum Phase1Outcome {
    /// Strictly feasible point, every constraint below `-margin`.
    Feasible(Vec<f64>),
    Infeasible { best_violation: f64 },
}

/// Minimizes the worst relaxed-constraint violation `s` subject to the domain
/// guards, starting from a point that satisfies the guards strictly. Returns
/// the original point unchanged when it is already strictly feasible.
pub fn phase1(
    p: &ConvexSubproblem,
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<Phase1Outcome, SolverError> {
    p.validate()?;
    if p.is_strictly_feasible(x0, 1e-9) {
        return Ok(Phase1Outcome::Feasible(x0.to_vec()));
    }
    for c in &p.constraints {
        if c.domain_guard {
            let g = c.kind.value(x0);
            if !(g < 0.0) {
                return Err(SolverError::Structural(format!(
                    "phase-I start violates domain guard {}",
                    c.label
                )));
            }
        }
    }

    let n = p.num_vars;
    let s_idx = n;
    let mut constraints: Vec<Constraint> = Vec::with_capacity(p.constraints.len() + 1);
    let mut worst = f64::NEG_INFINITY;
    for c in &p.constraints {
        if c.domain_guard {
            constraints.push(c.clone());
        } else {
            let g = c.kind.value(x0);
            if !g.is_finite() {
                return Err(SolverError::Structural(format!(
                    "constraint {} undefined at the phase-I start",
                    c.label
                )));
            }
            worst = worst.max(g);
            constraints.push(Constraint {
                label: format!("{}(relaxed)", c.label),
                domain_guard: false,
                kind: ConstraintKind::Relaxed { inner: Box::new(c.kind.clone()), s: s_idx },
            });
        }
    }
    // Keep the auxiliary bounded below; any certified margin ends the search.
    constraints.push(Constraint {
        label: "phase1_s_floor".into(),
        domain_guard: true,
        kind: ConstraintKind::Linear { terms: vec![(s_idx, -1.0)], rhs: 1.0 },
    });

    let mut c_min = vec![0.0; n + 1];
    c_min[s_idx] = 1.0; // minimize s
    let mut x: Vec<f64> = x0.to_vec();
    x.push(worst.max(0.0) + 1.0);

    let m = constraints.len() as f64;
    let mut t = opts.t_init;
    let mut iter_base = 0;
    loop {
        let out = newton::center(
            &c_min,
            t,
            &constraints,
            &mut x,
            opts.newton_cap,
            opts.newton_tol,
            opts.armijo,
            opts.backtrack,
            None,
            iter_base,
        );
        iter_base += out.iterations;
        let candidate = &x[..n];
        if p.max_violation(candidate) <= -opts.phase1_exit {
            return Ok(Phase1Outcome::Feasible(candidate.to_vec()));
        }
        if m / t < opts.gap_rel * m {
            break;
        }
        t *= opts.t_factor;
    }
    let candidate = &x[..n];
    let best = p.max_violation(candidate);
    if best < -1e-12 {
        Ok(Phase1Outcome::Feasible(candidate.to_vec()))
    } else {
        Ok(Phase1Outcome::Infeasible { best_violation: best })
    }
}

/// KKT residuals at a point with multipliers: the stationarity norm
/// `|| -c + sum lambda_i grad g_i ||` and the worst complementarity product
/// `max |lambda_i g_i|`.
pub fn kkt_residual(p: &ConvexSubproblem, x: &[f64], duals: &[f64]) -> (f64, f64) {
    let mut grad: Vec<f64> = p.objective.iter().map(|c| -c).collect();
    let mut idx = Vec::new();
    let mut val = Vec::new();
    let mut comp: f64 = 0.0;
    for (c, &lambda) in p.constraints.iter().zip(duals) {
        c.kind.grad(x, &mut idx, &mut val);
        for (i, v) in idx.iter().zip(&val) {
            grad[*i] += lambda * v;
        }
        comp = comp.max((lambda * c.kind.value(x)).abs());
    }
    let stat = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    (stat, comp)
}

/// Solves the subproblem with the barrier method, running phase I first when
/// the start (warm or suggested) is not strictly feasible.
pub fn solve(
    p: &ConvexSubproblem,
    warm: Option<&[f64]>,
    opts: &SolveOptions,
) -> Result<SolverSolution, SolverError> {
    p.validate()?;
    if p.num_vars == 0 {
        return Ok(SolverSolution {
            x: vec![],
            objective: 0.0,
            max_violation: f64::NEG_INFINITY,
            stationarity: 0.0,
            complementarity: 0.0,
            duals: vec![0.0; p.constraints.len()],
            newton_iterations: 0,
            centerings: 0,
            t_final: opts.t_init,
            status: SolveStatus::Optimal,
            trace: vec![],
        });
    }

    let start: Vec<f64> = match warm {
        Some(w) if w.len() == p.num_vars => w.to_vec(),
        _ => p.initial_point.clone(),
    };
    let mut x = if p.is_strictly_feasible(&start, opts.eps_feas) {
        start
    } else {
        match phase1(p, &start, opts)? {
            Phase1Outcome::Feasible(x) => x,
            Phase1Outcome::Infeasible { best_violation } => {
                return Ok(SolverSolution {
                    x: start.clone(),
                    objective: p.objective_value(&start),
                    max_violation: best_violation,
                    stationarity: f64::INFINITY,
                    complementarity: f64::INFINITY,
                    duals: vec![0.0; p.constraints.len()],
                    newton_iterations: 0,
                    centerings: 0,
                    t_final: opts.t_init,
                    status: SolveStatus::Infeasible,
                    trace: vec![],
                });
            }
        }
    };

    let c_min: Vec<f64> = p.objective.iter().map(|c| -c).collect();
    let m = p.constraints.len() as f64;
    let mut t = opts.t_init;
    let mut trace = Vec::new();
    let mut newton_total = 0;
    let mut centerings = 0;
    let mut last_converged = true;
    loop {
        let out = newton::center(
            &c_min,
            t,
            &p.constraints,
            &mut x,
            opts.newton_cap,
            opts.newton_tol,
            opts.armijo,
            opts.backtrack,
            if opts.collect_trace { Some(&mut trace) } else { None },
            newton_total,
        );
        newton_total += out.iterations;
        centerings += 1;
        last_converged = out.converged;
        if m / t < opts.gap_rel * m {
            break;
        }
        t *= opts.t_factor;
    }

    let duals: Vec<f64> = p
        .constraints
        .iter()
        .map(|c| 1.0 / (t * (-c.kind.value(&x)).max(1e-300)))
        .collect();
    let (stationarity, complementarity) = kkt_residual(p, &x, &duals);
    let max_violation = p.max_violation(&x);
    let c_norm = p.objective.iter().map(|c| c * c).sum::<f64>().sqrt();
    let status = if max_violation < 0.0
        && last_converged
        && stationarity <= 1e-6 * (1.0 + c_norm)
    {
        SolveStatus::Optimal
    } else {
        SolveStatus::MaxIter
    };
    Ok(SolverSolution {
        objective: p.objective_value(&x),
        x,
        max_violation,
        stationarity,
        complementarity,
        duals,
        newton_iterations: newton_total,
        centerings,
        t_final: t,
        status,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_cap_problem() -> ConvexSubproblem {
        ConvexSubproblem {
            num_vars: 1,
            objective: vec![1.0],
            constraints: vec![Constraint {
                label: "cap".into(),
                domain_guard: false,
                kind: ConstraintKind::Linear { terms: vec![(0, 1.0)], rhs: 10.0 },
            }],
            blocks: vec![VarBlock { name: "r".into(), start: 0, len: 1 }],
            initial_point: vec![1.0],
        }
    }

    fn log_rate_problem() -> ConvexSubproblem {
        ConvexSubproblem {
            num_vars: 2,
            objective: vec![1.0, 0.0],
            constraints: vec![
                Constraint {
                    label: "rate".into(),
                    domain_guard: false,
                    kind: ConstraintKind::LogRate { rate: 0, gamma: 1, bandwidth: 1.0 },
                },
                Constraint {
                    label: "gamma_cap".into(),
                    domain_guard: false,
                    kind: ConstraintKind::Linear { terms: vec![(1, 1.0)], rhs: 3.0 },
                },
                Constraint {
                    label: "gamma_floor".into(),
                    domain_guard: true,
                    kind: ConstraintKind::Linear { terms: vec![(1, -1.0)], rhs: 0.0 },
                },
            ],
            blocks: vec![],
            initial_point: vec![0.5, 1.0],
        }
    }

    #[test]
    fn maximizes_simple_linear_bound() {
        let p = linear_cap_problem();
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.x[0] - 10.0).abs() < 1e-6, "x = {}", sol.x[0]);
    }

    #[test]
    fn log_rate_cap_reaches_two() {
        let p = log_rate_problem();
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        // gamma -> 3, r -> log2(4) = 2
        assert!((sol.x[0] - 2.0).abs() < 1e-5, "r = {}", sol.x[0]);
    }

    #[test]
    fn phase1_detects_empty_feasible_set() {
        let p = ConvexSubproblem {
            num_vars: 1,
            objective: vec![1.0],
            constraints: vec![
                Constraint {
                    label: "upper".into(),
                    domain_guard: false,
                    kind: ConstraintKind::Linear { terms: vec![(0, 1.0)], rhs: -1.0 },
                },
                Constraint {
                    label: "positive".into(),
                    domain_guard: true,
                    kind: ConstraintKind::Linear { terms: vec![(0, -1.0)], rhs: -1e-3 },
                },
            ],
            blocks: vec![],
            initial_point: vec![0.5],
        };
        match phase1(&p, &[0.5], &SolveOptions::default()).unwrap() {
            Phase1Outcome::Infeasible { best_violation } => assert!(best_violation > 0.0),
            Phase1Outcome::Feasible(_) => panic!("expected infeasible"),
        }
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn phase1_keeps_strict_points_unchanged() {
        let p = linear_cap_problem();
        match phase1(&p, &[1.0], &SolveOptions::default()).unwrap() {
            Phase1Outcome::Feasible(x) => assert_eq!(x, vec![1.0]),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn central_path_complementarity_near_one_over_t() {
        let p = log_rate_problem();
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        let per = 1.0 / sol.t_final;
        for (c, &lam) in p.constraints.iter().zip(&sol.duals) {
            let prod = (lam * c.kind.value(&sol.x)).abs();
            assert!(
                prod > 0.3 * per && prod < 3.0 * per,
                "complementarity {prod} vs 1/t {per}"
            );
        }
    }

    #[test]
    fn zero_duals_stationarity_is_objective_norm() {
        let p = log_rate_problem();
        let (stat, comp) = kkt_residual(&p, &[0.5, 1.0], &[0.0, 0.0, 0.0]);
        assert!((stat - 1.0).abs() < 1e-12);
        assert_eq!(comp, 0.0);
    }

    #[test]
    fn returned_optimum_is_stationary() {
        let p = log_rate_problem();
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        let c_norm = p.objective.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(
            sol.stationarity <= 1e-6 * (1.0 + c_norm),
            "stationarity {}",
            sol.stationarity
        );
        assert!(sol.max_violation < 0.0);
    }

    #[test]
    fn barrier_descent_is_monotone_within_each_centering() {
        let p = log_rate_problem();
        let opts = SolveOptions { collect_trace: true, ..Default::default() };
        let sol = solve(&p, None, &opts).unwrap();
        assert!(!sol.trace.is_empty());
        for pair in sol.trace.windows(2) {
            if pair[0].t == pair[1].t {
                assert!(
                    pair[1].barrier_value <= pair[0].barrier_value + 1e-9,
                    "barrier increased: {} -> {}",
                    pair[0].barrier_value,
                    pair[1].barrier_value
                );
            }
        }
    }

    #[test]
    fn empty_problem_is_trivially_optimal() {
        let p = ConvexSubproblem {
            num_vars: 0,
            objective: vec![],
            constraints: vec![],
            blocks: vec![],
            initial_point: vec![],
        };
        let sol = solve(&p, None, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn structural_error_on_bad_indices() {
        let p = ConvexSubproblem {
            num_vars: 1,
            objective: vec![1.0],
            constraints: vec![Constraint {
                label: "oob".into(),
                domain_guard: false,
                kind: ConstraintKind::Linear { terms: vec![(3, 1.0)], rhs: 0.0 },
            }],
            blocks: vec![],
            initial_point: vec![0.0],
        };
        assert!(matches!(
            solve(&p, None, &SolveOptions::default()),
            Err(SolverError::Structural(_))
        ));
    }

    #[test]
    fn dump_lists_constraint_tags() {
        let p = log_rate_problem();
        let dump = p.dump();
        let tags: Vec<&str> = dump["constraints"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["tag"].as_str().unwrap())
            .collect();
        assert_eq!(tags, vec!["log-rate", "linear", "linear"]);
    }
}
