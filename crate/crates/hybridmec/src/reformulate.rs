//! Transformations from the original mixed-integer nonconvex problem to the
//! convex subproblem solved each outer iteration.
//!
//! Four steps, applied in sequence:
//! 1. the l0 fronthaul count is replaced by a reweighted l1 surrogate with
//!    weights `beta_{b,k} = 1/(delta + ||w'_{b,k}||^2)`,
//! 2. the bilinear surrogate load `q_{b,k} r_k` is majorized by the SCA
//!    expansion around the previous iterate `(q', r')`,
//! 3. an auxiliary `gamma_k` decouples the rate bound from the SINR,
//! 4. the fractional SINR constraint becomes the quadratic-transform residual
//!    `g_k <= 0` with a closed-form multiplier `u_k`.
//!
//! [`assemble_subproblem`] emits the resulting constraint system for the
//! whole network (centralized protocol) or for a single serving entity with
//! fixed foreign interference (decentralized protocols). Internally the
//! subproblem is scaled: channels are normalized by the noise standard
//! deviation, rates by the bandwidth, and compute cycles by the owning
//! platform's capacity, which keeps every variable near unit magnitude.

use crate::model::{interference_at, rx_amplitude, ModelError, VariableState};
use crate::scenario::{Entity, NetworkScenario};
use crate::solver::{Constraint, ConstraintKind, ConvexSubproblem, RankTwo, ScaPair, VarBlock};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Lower bounds keeping the barrier domain away from the hyperbolic and
/// logarithmic singularities: 1 bit/s and 1 cycle/s.
pub const RATE_FLOOR_BPS: f64 = 1.0;
pub const CYCLE_FLOOR: f64 = 1.0;

/// Default reweighting offset; anything positive is admissible.
pub const DEFAULT_DELTA: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ReformulateError {
    #[error("scope error: {0}")]
    Scope(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Optimization scope: the whole network (centralized) or one serving entity
/// with every other entity's interference held constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Network,
    Single(Entity),
}

impl Scope {
    pub fn users(&self, sc: &NetworkScenario) -> Vec<usize> {
        match self {
            Scope::Network => (0..sc.num_users()).collect(),
            Scope::Single(ent) => sc.users_of(*ent),
        }
    }

    /// Does this scope own the cloud side (BSs, fronthaul, cloud capacity)?
    pub fn includes_cloud(&self) -> bool {
        matches!(self, Scope::Network | Scope::Single(Entity::Cloud))
    }

    pub fn edge_clouds(&self, sc: &NetworkScenario) -> Vec<usize> {
        match self {
            Scope::Network => (0..sc.num_ec()).collect(),
            Scope::Single(Entity::Edge(e)) => vec![*e],
            Scope::Single(Entity::Cloud) => vec![],
        }
    }
}

/// Fixed values carried between outer iterations: reweighting weights and the
/// SCA anchor pair, all taken from the previous subproblem solution.
#[derive(Debug, Clone)]
pub struct SurrogateAnchors {
    /// beta_{b,k} per (user, BS); empty rows for edge users.
    pub beta: Vec<Vec<f64>>,
    pub q_prev: Vec<Vec<f64>>,
    /// Previous rates in bits/s.
    pub rates_prev: Vec<f64>,
    pub delta: f64,
}

impl SurrogateAnchors {
    pub fn from_state(state: &VariableState) -> Self {
        SurrogateAnchors {
            beta: state.beta.clone(),
            q_prev: state.q_prev.clone(),
            rates_prev: state.rates_prev.clone(),
            delta: DEFAULT_DELTA,
        }
    }
}

/// Single-link reweighting rule `beta = 1/(delta + ||w'||^2)`.
pub fn reweight(link_power: f64, delta: f64) -> f64 {
    1.0 / (delta + link_power)
}

/// Updates every weight from the previous beamformers. Links with low
/// allocated power receive large weights and are pushed toward deactivation.
pub fn update_weights(state: &VariableState, sc: &NetworkScenario, delta: f64) -> Vec<Vec<f64>> {
    assert!(delta > 0.0, "reweighting needs delta > 0");
    (0..sc.num_users())
        .map(|k| {
            if sc.association[k] != Entity::Cloud {
                return vec![];
            }
            (0..sc.num_bs())
                .map(|b| reweight(state.bs_link_power(sc, b, k), delta))
                .collect()
        })
        .collect()
}

/// Left-hand side of the SCA-relaxed fronthaul constraint for one BS:
/// `sum_k (q_k + r_k)^2 - 2(q'_k - r'_k)(q_k - r_k) + (q'_k - r'_k)^2`.
/// The constraint form is `lhs <= 4 R_b^max`. The expansion majorizes
/// `4 q_k r_k` and is tight at the anchor.
pub fn sca_fronthaul_lhs(q: &[f64], r: &[f64], q_prev: &[f64], r_prev: &[f64]) -> f64 {
    assert!(q.len() == r.len() && q.len() == q_prev.len() && q.len() == r_prev.len());
    q.iter()
        .zip(r)
        .zip(q_prev.iter().zip(r_prev))
        .map(|((&q, &r), (&qp, &rp))| {
            let d = qp - rp;
            (q + r).powi(2) - 2.0 * d * (q - r) + d * d
        })
        .sum()
}

/// Quadratic-transform residual `g_k` of the SINR constraint (constraint form
/// `g_k <= 0`); convex in the beamformers for fixed `u_k` and tight at the
/// optimal multiplier: `g_k(u*) = gamma_k - SINR_k`.
pub fn quadratic_transform_residual(
    k: usize,
    state: &VariableState,
    gamma_k: f64,
    u_k: Complex64,
    sc: &NetworkScenario,
) -> f64 {
    let rx = rx_amplitude(k, k, state, sc);
    let denom = sc.noise_power_w + interference_at(k, 0..sc.num_users(), state, sc);
    gamma_k - 2.0 * (u_k * rx).re + u_k.norm_sqr() * denom
}

/// Closed-form optimal multiplier `u_k* = (w_k^d h_k) / (sigma^2 + interference)`.
pub fn optimal_u(k: usize, state: &VariableState, sc: &NetworkScenario) -> Complex64 {
    let rx = rx_amplitude(k, k, state, sc);
    let denom = sc.noise_power_w + interference_at(k, 0..sc.num_users(), state, sc);
    rx.conj() / denom
}

/// Scoped variant: interference restricted to `sources` plus a fixed foreign
/// term, as each entity sees it in the decentralized protocols.
pub fn optimal_u_scoped(
    k: usize,
    sources: &[usize],
    foreign: f64,
    state: &VariableState,
    sc: &NetworkScenario,
) -> Complex64 {
    let rx = rx_amplitude(k, k, state, sc);
    let denom = sc.noise_power_w + foreign + interference_at(k, sources.iter().copied(), state, sc);
    rx.conj() / denom
}

/// Refreshes the outer-loop auxiliaries of every user in `scope`: the
/// reweighting weights (unless frozen), the SCA anchors, and the FP
/// multipliers computed from the scope's view of the interference.
pub fn refresh_auxiliaries(
    state: &mut VariableState,
    sc: &NetworkScenario,
    scope: Scope,
    foreign: &[f64],
    delta: f64,
    freeze_beta: bool,
) {
    let users = scope.users(sc);
    if !freeze_beta {
        let fresh = update_weights(state, sc, delta);
        for &k in &users {
            state.beta[k] = fresh[k].clone();
        }
    }
    for &k in &users {
        state.q_prev[k] = state.q[k].clone();
        state.rates_prev[k] = state.rates[k];
        state.fp_aux[k] = optimal_u_scoped(k, &users, foreign[k], state, sc);
    }
}

/// Where each user's variables live inside the assembled vector. Beamformer
/// coefficients are interleaved re/im pairs.
#[derive(Debug, Clone)]
pub struct UserSlot {
    pub user: usize,
    /// (start, complex length) of the beamformer block.
    pub w: (usize, usize),
    pub rate: usize,
    pub cycles: usize,
    pub gamma: usize,
    /// (start, length) of the per-BS q entries; length 0 for edge users.
    pub q: (usize, usize),
    /// Cycle scaling: the owning platform's capacity.
    pub f_cap: f64,
}

#[derive(Debug, Clone)]
pub struct ScopeLayout {
    pub scope: Scope,
    pub slots: Vec<UserSlot>,
    pub num_vars: usize,
    pub bandwidth: f64,
}

impl ScopeLayout {
    /// Writes a solver point back into the state, undoing the internal
    /// scaling. Only variables owned by the scope are touched.
    pub fn extract_into(&self, x: &[f64], state: &mut VariableState) {
        for slot in &self.slots {
            let k = slot.user;
            let (w0, wlen) = slot.w;
            let beam = &mut state.beams[k];
            for j in 0..wlen {
                beam[j] = Complex64::new(x[w0 + 2 * j], x[w0 + 2 * j + 1]);
            }
            state.rates[k] = x[slot.rate] * self.bandwidth;
            state.cycles[k] = x[slot.cycles] * slot.f_cap;
            state.gamma[k] = x[slot.gamma];
            let (q0, qlen) = slot.q;
            for b in 0..qlen {
                state.q[k][b] = x[q0 + b];
            }
        }
    }

    /// Variable count in the complexity-bookkeeping convention: per user, the
    /// three scalars (r, f, gamma), the dense aggregate beamformer over the
    /// scope's antennas (complex coefficients counted once), and one
    /// fronthaul surrogate per in-scope BS.
    pub fn nominal_dof(&self, sc: &NetworkScenario) -> usize {
        let (antennas, n_bs) = match self.scope {
            Scope::Network => (
                sc.num_bs() * sc.topology.bs_antennas + sc.num_ec() * sc.topology.uav_antennas,
                sc.num_bs(),
            ),
            Scope::Single(Entity::Cloud) => {
                (sc.num_bs() * sc.topology.bs_antennas, sc.num_bs())
            }
            Scope::Single(Entity::Edge(_)) => (sc.topology.uav_antennas, 0),
        };
        self.slots.len() * (3 + antennas + n_bs)
    }
}

pub struct Assembled {
    pub problem: ConvexSubproblem,
    pub layout: ScopeLayout,
}

/// Builds problem (objective, constraints, strictly-clipped start) for the
/// given scope. `foreign` holds, per user, the interference power (watts)
/// caused by out-of-scope entities, treated as additional noise; it must be
/// all zeros for the network scope.
pub fn assemble_subproblem(
    scope: Scope,
    state: &VariableState,
    anchors: &SurrogateAnchors,
    sc: &NetworkScenario,
    foreign: &[f64],
) -> Result<Assembled, ReformulateError> {
    state.check_dims(sc)?;
    if foreign.len() != sc.num_users() {
        return Err(ReformulateError::Scope(format!(
            "foreign interference has {} entries for {} users",
            foreign.len(),
            sc.num_users()
        )));
    }
    if let Scope::Single(Entity::Edge(e)) = scope {
        if e >= sc.num_ec() {
            return Err(ReformulateError::Scope(format!(
                "scope references EC {e} of {}",
                sc.num_ec()
            )));
        }
    }
    let users = scope.users(sc);
    let sigma = sc.noise_power_w.sqrt();
    let tau = sc.channel_params.bandwidth_hz;
    let n_bs = sc.num_bs();

    // Variable layout.
    let mut slots = Vec::with_capacity(users.len());
    let mut blocks = Vec::new();
    let mut n = 0usize;
    for &k in &users {
        let wlen = sc.beam_len(k);
        let central = sc.association[k] == Entity::Cloud;
        let w = (n, wlen);
        blocks.push(VarBlock { name: format!("w[{k}]"), start: n, len: 2 * wlen });
        n += 2 * wlen;
        let rate = n;
        blocks.push(VarBlock { name: format!("r[{k}]"), start: n, len: 1 });
        n += 1;
        let cycles = n;
        blocks.push(VarBlock { name: format!("f[{k}]"), start: n, len: 1 });
        n += 1;
        let gamma = n;
        blocks.push(VarBlock { name: format!("gamma[{k}]"), start: n, len: 1 });
        n += 1;
        let q = if central {
            let q0 = n;
            blocks.push(VarBlock { name: format!("q[{k}]"), start: n, len: n_bs });
            n += n_bs;
            (q0, n_bs)
        } else {
            (n, 0)
        };
        let f_cap = if central { sc.budgets.cloud_cycles } else { sc.budgets.ec_cycles };
        slots.push(UserSlot { user: k, w, rate, cycles, gamma, q, f_cap });
    }
    let layout = ScopeLayout { scope, slots, num_vars: n, bandwidth: tau };

    let mut objective = vec![0.0; n];
    for slot in &layout.slots {
        objective[slot.rate] = sc.tasks[slot.user].weight;
    }

    let mut constraints = Vec::new();

    // Scaled channel lift of victim k's channel over source i's block.
    let lift = |victim: usize, source_slot: &UserSlot| -> RankTwo {
        let block = sc.serving_block(sc.association[source_slot.user]);
        let h: Vec<Complex64> = sc.channels[victim].coeffs[block]
            .iter()
            .map(|c| c / sigma)
            .collect();
        RankTwo::from_channel(source_slot.w.0, &h)
    };

    for (si, slot) in layout.slots.iter().enumerate() {
        let k = slot.user;
        let central = sc.association[k] == Entity::Cloud;
        let task = &sc.tasks[k];

        // Quadratic-transform residual g_k <= 0 with the scope's multiplier.
        let u_scaled = state.fp_aux[k] * sigma;
        let own = lift(k, slot);
        let mut lin = Vec::with_capacity(2 * slot.w.1);
        for (o, (cr, ci)) in own.c_re.iter().zip(&own.c_im).enumerate() {
            lin.push((slot.w.0 + o, -2.0 * (u_scaled.re * cr - u_scaled.im * ci)));
        }
        let quads: Vec<RankTwo> = layout
            .slots
            .iter()
            .enumerate()
            .filter(|(sj, _)| *sj != si)
            .map(|(_, other)| lift(k, other))
            .collect();
        constraints.push(Constraint {
            label: format!("fp_residual[{k}]"),
            domain_guard: false,
            kind: ConstraintKind::FpResidual {
                gamma: slot.gamma,
                lin,
                usq: u_scaled.norm_sqr(),
                noise: 1.0 + foreign[k] / sc.noise_power_w,
                quads,
            },
        });

        // Shannon bound r <= log2(1 + gamma) in bandwidth-scaled rates.
        constraints.push(Constraint {
            label: format!("rate_bound[{k}]"),
            domain_guard: false,
            kind: ConstraintKind::LogRate { rate: slot.rate, gamma: slot.gamma, bandwidth: 1.0 },
        });

        // Delay: F/f + D/r <= t (- Lambda for cloud users), in scaled variables.
        let rhs = task.max_delay_s - if central { task.fronthaul_delay_s } else { 0.0 };
        constraints.push(Constraint {
            label: format!("delay[{k}]"),
            domain_guard: false,
            kind: ConstraintKind::Hyperbolic {
                f: slot.cycles,
                r: slot.rate,
                a: task.cycles_per_task / slot.f_cap,
                c: task.data_size_bits / tau,
                rhs,
            },
        });

        // Domain guards.
        constraints.push(Constraint {
            label: format!("rate_floor[{k}]"),
            domain_guard: true,
            kind: ConstraintKind::Linear {
                terms: vec![(slot.rate, -1.0)],
                rhs: -RATE_FLOOR_BPS / tau,
            },
        });
        constraints.push(Constraint {
            label: format!("cycle_floor[{k}]"),
            domain_guard: true,
            kind: ConstraintKind::Linear {
                terms: vec![(slot.cycles, -1.0)],
                rhs: -CYCLE_FLOOR / slot.f_cap,
            },
        });
        constraints.push(Constraint {
            label: format!("gamma_floor[{k}]"),
            domain_guard: true,
            kind: ConstraintKind::Linear { terms: vec![(slot.gamma, -1.0)], rhs: 0.0 },
        });

        if central {
            // q_{b,k} >= beta_{b,k} ||w_{b,k}||^2, one per BS.
            let l = sc.topology.bs_antennas;
            for b in 0..n_bs {
                let mut quad = Vec::with_capacity(2 * l);
                for j in 0..2 * l {
                    quad.push((slot.w.0 + 2 * b * l + j, anchors.beta[k][b]));
                }
                constraints.push(Constraint {
                    label: format!("q_def[{b},{k}]"),
                    domain_guard: false,
                    kind: ConstraintKind::DiagQuad {
                        quad,
                        lin: vec![(slot.q.0 + b, -1.0)],
                        rhs: 0.0,
                    },
                });
                constraints.push(Constraint {
                    label: format!("q_floor[{b},{k}]"),
                    domain_guard: true,
                    kind: ConstraintKind::Linear { terms: vec![(slot.q.0 + b, -1.0)], rhs: 0.0 },
                });
            }
        }
    }

    if scope.includes_cloud() {
        let central_slots: Vec<&UserSlot> = layout
            .slots
            .iter()
            .filter(|s| sc.association[s.user] == Entity::Cloud)
            .collect();
        if !central_slots.is_empty() {
            let l = sc.topology.bs_antennas;
            for b in 0..n_bs {
                // SCA-relaxed fronthaul for BS b.
                let mut pairs = Vec::with_capacity(central_slots.len());
                let mut constant = 0.0;
                for slot in &central_slots {
                    let k = slot.user;
                    let d = anchors.q_prev[k][b] - anchors.rates_prev[k] / tau;
                    constant += d * d;
                    pairs.push(ScaPair { q: slot.q.0 + b, r: slot.rate, anchor_diff: d });
                }
                constraints.push(Constraint {
                    label: format!("fronthaul_sca[{b}]"),
                    domain_guard: false,
                    kind: ConstraintKind::ScaFronthaul {
                        pairs,
                        constant,
                        rhs: 4.0 * sc.budgets.fronthaul_bps / tau,
                    },
                });

                // Per-BS transmit power ball.
                let mut quad = Vec::new();
                for slot in &central_slots {
                    for j in 0..2 * l {
                        quad.push((slot.w.0 + 2 * b * l + j, 1.0));
                    }
                }
                constraints.push(Constraint {
                    label: format!("bs_power[{b}]"),
                    domain_guard: false,
                    kind: ConstraintKind::DiagQuad {
                        quad,
                        lin: vec![],
                        rhs: sc.budgets.bs_power_w,
                    },
                });
            }

            // Cloud computation capacity: sum of scaled cycles <= 1.
            constraints.push(Constraint {
                label: "cloud_capacity".into(),
                domain_guard: false,
                kind: ConstraintKind::Linear {
                    terms: central_slots.iter().map(|s| (s.cycles, 1.0)).collect(),
                    rhs: 1.0,
                },
            });
        }
    }

    for e in scope.edge_clouds(sc) {
        let ec_slots: Vec<&UserSlot> = layout
            .slots
            .iter()
            .filter(|s| sc.association[s.user] == Entity::Edge(e))
            .collect();
        if ec_slots.is_empty() {
            continue;
        }
        let mut w_idx = Vec::new();
        for slot in &ec_slots {
            for j in 0..2 * slot.w.1 {
                w_idx.push(slot.w.0 + j);
            }
        }
        let budget = sc.budgets.ec_power_w
            - if sc.budgets.include_operation_power_in_constraint {
                sc.budgets.ec_operation_power_w
            } else {
                0.0
            };
        constraints.push(Constraint {
            label: format!("ec_power[{e}]"),
            domain_guard: false,
            kind: ConstraintKind::PowerEc {
                w: w_idx,
                f: ec_slots.iter().map(|s| s.cycles).collect(),
                coeff: sc.budgets.cpu_coeff
                    * sc.budgets.ec_cycles.powf(sc.budgets.cpu_exponent),
                exponent: sc.budgets.cpu_exponent,
                rhs: budget,
            },
        });
        constraints.push(Constraint {
            label: format!("ec_capacity[{e}]"),
            domain_guard: false,
            kind: ConstraintKind::Linear {
                terms: ec_slots.iter().map(|s| (s.cycles, 1.0)).collect(),
                rhs: 1.0,
            },
        });
    }

    // Start point: the current iterate, clipped strictly inside the guards.
    let mut x0 = vec![0.0; n];
    for slot in &layout.slots {
        let k = slot.user;
        for j in 0..slot.w.1 {
            x0[slot.w.0 + 2 * j] = state.beams[k][j].re;
            x0[slot.w.0 + 2 * j + 1] = state.beams[k][j].im;
        }
        x0[slot.rate] = (state.rates[k] / tau).max(2.0 * RATE_FLOOR_BPS / tau);
        x0[slot.cycles] = (state.cycles[k] / slot.f_cap).max(2.0 * CYCLE_FLOOR / slot.f_cap);
        x0[slot.gamma] = state.gamma[k].max(1e-12);
        for b in 0..slot.q.1 {
            x0[slot.q.0 + b] = state.q[k][b].max(1e-12);
        }
    }

    Ok(Assembled {
        problem: ConvexSubproblem {
            num_vars: n,
            objective,
            constraints,
            blocks,
            initial_point: x0,
        },
        layout,
    })
}

/// Random feasible-leaning initialization: complex Gaussian beamformers
/// rescaled so each BS spends half its power budget and each EC splits half
/// its residual budget between transmit and compute, rates and SINR
/// auxiliaries strictly inside their bounds, equal compute splits, and the
/// fronthaul surrogate load scaled under capacity. Residual infeasibilities
/// (e.g. tight delay targets) are left to the solver's phase I.
pub fn initialize_state<R: Rng>(sc: &NetworkScenario, rng: &mut R) -> VariableState {
    let mut state = VariableState::zeros(sc);
    let normal = Normal::new(0.0, (0.5f64).sqrt()).expect("fixed std");
    for k in 0..sc.num_users() {
        for c in &mut state.beams[k] {
            *c = Complex64::new(normal.sample(rng), normal.sample(rng));
        }
    }

    // Per-BS rescale: every BS transmits at half budget.
    let central = sc.central_users();
    let l = sc.topology.bs_antennas;
    for b in 0..sc.num_bs() {
        let used: f64 = central
            .iter()
            .map(|&k| state.beams[k][b * l..(b + 1) * l].iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum();
        if used > 0.0 {
            let scale = (0.5 * sc.budgets.bs_power_w / used).sqrt();
            for &k in &central {
                for c in &mut state.beams[k][b * l..(b + 1) * l] {
                    *c *= scale;
                }
            }
        }
    }

    // Cloud users: equal compute split with headroom.
    if !central.is_empty() {
        let share = 0.9 * sc.budgets.cloud_cycles / central.len() as f64;
        for &k in &central {
            state.cycles[k] = share;
        }
    }

    // Edge clouds: half the power budget to compute, half of the rest to
    // transmit.
    for e in 0..sc.num_ec() {
        let users = sc.edge_users_of(e);
        if users.is_empty() {
            continue;
        }
        let budget = sc.budgets.ec_power_w
            - if sc.budgets.include_operation_power_in_constraint {
                sc.budgets.ec_operation_power_w
            } else {
                0.0
            };
        let budget = budget.max(1e-9);
        let cycles_total = (0.5 * budget / sc.budgets.cpu_coeff)
            .powf(1.0 / sc.budgets.cpu_exponent)
            .min(0.9 * sc.budgets.ec_cycles);
        let compute_power = sc.budgets.cpu_coeff * cycles_total.powf(sc.budgets.cpu_exponent);
        let tx_budget = 0.5 * (budget - compute_power).max(0.0);
        let used: f64 = users
            .iter()
            .map(|&k| state.beams[k].iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum();
        if used > 0.0 {
            let scale = (tx_budget / used).sqrt();
            for &k in &users {
                for c in &mut state.beams[k] {
                    *c *= scale;
                }
            }
        }
        for &k in &users {
            state.cycles[k] = cycles_total / users.len() as f64;
        }
    }

    // Auxiliaries from the drawn beamformers.
    let tau = sc.channel_params.bandwidth_hz;
    for k in 0..sc.num_users() {
        state.fp_aux[k] = optimal_u(k, &state, sc);
        let s = crate::model::sinr(k, &state, sc).expect("dims fixed above");
        state.gamma[k] = 0.95 * s;
        state.rates[k] = (0.9 * tau * (1.0 + state.gamma[k]).log2()).max(2.0 * RATE_FLOOR_BPS);
    }
    state.beta = update_weights(&state, sc, DEFAULT_DELTA);
    for &k in &central {
        for b in 0..sc.num_bs() {
            state.q[k][b] = 1.05 * state.beta[k][b] * state.bs_link_power(sc, b, k) + 1e-9;
        }
    }

    // Keep the initial surrogate fronthaul load strictly under capacity by
    // shrinking rates jointly if needed.
    let mut shrink: f64 = 1.0;
    for b in 0..sc.num_bs() {
        let load: f64 = central
            .iter()
            .map(|&k| state.q[k][b] * state.rates[k] / tau)
            .sum();
        let cap = 0.9 * sc.budgets.fronthaul_bps / tau;
        if load > cap {
            shrink = shrink.min(cap / load);
        }
    }
    if shrink < 1.0 {
        for &k in &central {
            state.rates[k] = (state.rates[k] * shrink).max(2.0 * RATE_FLOOR_BPS);
        }
    }

    state.q_prev = state.q.clone();
    state.rates_prev = state.rates.clone();
    state
}
