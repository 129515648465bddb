//! Problem-instance data model: the optimization variable state, metric
//! evaluation (SINR, rates, powers, delays, fronthaul loads), and feasibility
//! auditing of candidate solutions against the original, unrelaxed problem.
//!
//! Metric evaluation is pure; nothing here mutates a scenario or state.

use crate::scenario::{Entity, NetworkScenario};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// `h^dagger w` with the conjugate on the channel side.
pub fn cdot(h: &[Complex64], w: &[Complex64]) -> Complex64 {
    h.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

mod complex_vecs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        let flat: Vec<Vec<f64>> = v
            .iter()
            .map(|w| w.iter().flat_map(|c| [c.re, c.im]).collect())
            .collect();
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let flat = Vec::<Vec<f64>>::deserialize(d)?;
        flat.into_iter()
            .map(|w| {
                if w.len() % 2 != 0 {
                    return Err(serde::de::Error::custom("odd interleaved beam length"));
                }
                Ok(w.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
            })
            .collect()
    }
}

mod complex_flat {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let flat: Vec<f64> = v.iter().flat_map(|c| [c.re, c.im]).collect();
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let flat = Vec::<f64>::deserialize(d)?;
        if flat.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd interleaved length"));
        }
        Ok(flat.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Current iterate of every optimization variable plus the outer-loop
/// auxiliaries (fractional-programming multipliers and reweighting anchors).
///
/// Beamformers are stored over the user's serving entity only: a cloud user
/// owns the stacked `B*L_c` coefficients, an edge user the `L_e` of its UAV.
/// `q`, `beta`, and `q_prev` carry one entry per BS for cloud users and are
/// empty for edge users, which never touch a fronthaul link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableState {
    #[serde(with = "complex_vecs")]
    pub beams: Vec<Vec<Complex64>>,
    /// Allocated rates r_k, bits/s.
    pub rates: Vec<f64>,
    /// Allocated computation f_k, cycles/s.
    pub cycles: Vec<f64>,
    /// Fronthaul surrogate q_{b,k} per (user, BS).
    pub q: Vec<Vec<f64>>,
    /// SINR auxiliaries gamma_k.
    pub gamma: Vec<f64>,
    /// Fractional-programming auxiliaries u_k.
    #[serde(with = "complex_flat")]
    pub fp_aux: Vec<Complex64>,
    /// Reweighting weights beta_{b,k} per (user, BS).
    pub beta: Vec<Vec<f64>>,
    /// Previous-iterate anchors for the SCA surrogate.
    pub q_prev: Vec<Vec<f64>>,
    pub rates_prev: Vec<f64>,
}

impl VariableState {
    /// All-zero state with the right shapes for `sc`.
    pub fn zeros(sc: &NetworkScenario) -> Self {
        let k = sc.num_users();
        let b = sc.num_bs();
        let per_bs = |k_idx: usize| {
            if sc.association[k_idx] == Entity::Cloud {
                vec![0.0; b]
            } else {
                vec![]
            }
        };
        VariableState {
            beams: (0..k).map(|i| vec![Complex64::new(0.0, 0.0); sc.beam_len(i)]).collect(),
            rates: vec![0.0; k],
            cycles: vec![0.0; k],
            q: (0..k).map(per_bs).collect(),
            gamma: vec![0.0; k],
            fp_aux: vec![Complex64::new(0.0, 0.0); k],
            beta: (0..k).map(per_bs).collect(),
            q_prev: (0..k).map(per_bs).collect(),
            rates_prev: vec![0.0; k],
        }
    }

    pub fn check_dims(&self, sc: &NetworkScenario) -> Result<(), ModelError> {
        let k = sc.num_users();
        if self.beams.len() != k
            || self.rates.len() != k
            || self.cycles.len() != k
            || self.q.len() != k
            || self.gamma.len() != k
        {
            return Err(ModelError::Dimension(format!(
                "state sized for {} users, scenario has {k}",
                self.beams.len()
            )));
        }
        for (i, w) in self.beams.iter().enumerate() {
            if w.len() != sc.beam_len(i) {
                return Err(ModelError::Dimension(format!(
                    "user {i} beam has {} coefficients, expected {}",
                    w.len(),
                    sc.beam_len(i)
                )));
            }
        }
        Ok(())
    }

    /// `||w_{b,k}||^2` for a cloud user, 0 for edge users.
    pub fn bs_link_power(&self, sc: &NetworkScenario, b: usize, k: usize) -> f64 {
        if sc.association[k] != Entity::Cloud {
            return 0.0;
        }
        let l = sc.topology.bs_antennas;
        norm_sqr(&self.beams[k][b * l..(b + 1) * l])
    }

    /// Copy with computation allocations floored to whole cycles/s.
    pub fn with_floored_cycles(&self) -> Self {
        let mut s = self.clone();
        for f in &mut s.cycles {
            *f = f.floor().max(1.0);
        }
        s
    }
}

/// Complex amplitude `h_k^dagger w_i` received at user `k` from the signal
/// beamformed for user `i` (taken over user `i`'s serving-entity block).
pub fn rx_amplitude(k: usize, i: usize, state: &VariableState, sc: &NetworkScenario) -> Complex64 {
    let block = sc.serving_block(sc.association[i]);
    cdot(&sc.channels[k].coeffs[block], &state.beams[i])
}

/// Interference power at user `k` summed over `sources` (skipping `k` itself).
pub fn interference_at<I: IntoIterator<Item = usize>>(
    k: usize,
    sources: I,
    state: &VariableState,
    sc: &NetworkScenario,
) -> f64 {
    sources
        .into_iter()
        .filter(|&i| i != k)
        .map(|i| rx_amplitude(k, i, state, sc).norm_sqr())
        .sum()
}

/// SINR of user `k` treating every other user's signal as interference.
pub fn sinr(k: usize, state: &VariableState, sc: &NetworkScenario) -> Result<f64, ModelError> {
    state.check_dims(sc)?;
    let signal = rx_amplitude(k, k, state, sc).norm_sqr();
    let interference = interference_at(k, 0..sc.num_users(), state, sc);
    Ok(signal / (sc.noise_power_w + interference))
}

/// Shannon rate bound `tau log2(1 + SINR_k)` in bits/s.
pub fn rate_bound(k: usize, state: &VariableState, sc: &NetworkScenario) -> Result<f64, ModelError> {
    Ok(sc.channel_params.bandwidth_hz * (1.0 + sinr(k, state, sc)?).log2())
}

/// Transmit power of BS `b`: sum of its per-user link powers.
pub fn power_bs(b: usize, state: &VariableState, sc: &NetworkScenario) -> f64 {
    (0..sc.num_users()).map(|k| state.bs_link_power(sc, b, k)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcPower {
    pub transmit_w: f64,
    pub computation_w: f64,
    pub operation_w: f64,
    pub total_w: f64,
}

/// Power consumption of EC `e`: transmit + computation + operation.
pub fn power_ec(e: usize, state: &VariableState, sc: &NetworkScenario) -> EcPower {
    let users = sc.edge_users_of(e);
    let transmit: f64 = users.iter().map(|&k| norm_sqr(&state.beams[k])).sum();
    let cycles: f64 = users.iter().map(|&k| state.cycles[k]).sum();
    let computation = sc.budgets.cpu_coeff * cycles.powf(sc.budgets.cpu_exponent);
    let operation = sc.budgets.ec_operation_power_w;
    EcPower {
        transmit_w: transmit,
        computation_w: computation,
        operation_w: operation,
        total_w: transmit + computation + operation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayBreakdown {
    pub computation_s: f64,
    pub fronthaul_s: f64,
    pub transmission_s: f64,
    pub total_s: f64,
}

/// Total processing delay of user `k`: computation + fronthaul (cloud users
/// only) + transmission.
pub fn delay(k: usize, state: &VariableState, sc: &NetworkScenario) -> Result<DelayBreakdown, ModelError> {
    let f = state.cycles[k];
    let r = state.rates[k];
    if !(f > 0.0) || !(r > 0.0) {
        return Err(ModelError::Domain(format!(
            "delay needs f_k > 0 and r_k > 0, got f={f}, r={r}"
        )));
    }
    let task = &sc.tasks[k];
    let computation = task.cycles_per_task / f;
    let fronthaul = if sc.association[k] == Entity::Cloud {
        task.fronthaul_delay_s
    } else {
        0.0
    };
    let transmission = task.data_size_bits / r;
    Ok(DelayBreakdown {
        computation_s: computation,
        fronthaul_s: fronthaul,
        transmission_s: transmission,
        total_s: computation + fronthaul + transmission,
    })
}

/// Default link-activity threshold for the l0 fronthaul load: the reweighted
/// l1 drives inactive links toward, not exactly to, zero.
pub fn default_activity_threshold(sc: &NetworkScenario) -> f64 {
    1e-6 * sc.budgets.bs_power_w
}

/// Fronthaul load of BS `b`: sum of rates over links whose beamforming power
/// exceeds `threshold` (the realized l0 norm).
pub fn fronthaul_load(b: usize, state: &VariableState, sc: &NetworkScenario, threshold: f64) -> f64 {
    (0..sc.num_users())
        .filter(|&k| state.bs_link_power(sc, b, k) > threshold)
        .map(|k| state.rates[k])
        .sum()
}

/// Weighted sum rate, the problem objective.
pub fn objective(state: &VariableState, sc: &NetworkScenario) -> f64 {
    state
        .rates
        .iter()
        .zip(&sc.tasks)
        .map(|(r, t)| t.weight * r)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserMetrics {
    pub sinr: f64,
    pub rate_bound_bps: f64,
    pub rate_bps: f64,
    pub cycles: f64,
    pub delay: DelayBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsMetrics {
    pub power_w: f64,
    pub fronthaul_load_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_user: Vec<UserMetrics>,
    pub per_bs: Vec<BsMetrics>,
    pub per_ec: Vec<EcPower>,
    pub objective: f64,
}

/// Evaluates every reporting metric on a state. Infinite delays (zero f or r)
/// are clamped rather than rejected so that degenerate states remain
/// serializable.
pub fn metrics(state: &VariableState, sc: &NetworkScenario) -> Result<MetricsReport, ModelError> {
    state.check_dims(sc)?;
    let threshold = default_activity_threshold(sc);
    let per_user = (0..sc.num_users())
        .map(|k| {
            let d = delay(k, state, sc).unwrap_or(DelayBreakdown {
                computation_s: 1e300,
                fronthaul_s: 0.0,
                transmission_s: 1e300,
                total_s: 1e300,
            });
            Ok(UserMetrics {
                sinr: sinr(k, state, sc)?,
                rate_bound_bps: rate_bound(k, state, sc)?,
                rate_bps: state.rates[k],
                cycles: state.cycles[k],
                delay: d,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let per_bs = (0..sc.num_bs())
        .map(|b| BsMetrics {
            power_w: power_bs(b, state, sc),
            fronthaul_load_bps: fronthaul_load(b, state, sc, threshold),
        })
        .collect();
    let per_ec = (0..sc.num_ec()).map(|e| power_ec(e, state, sc)).collect();
    Ok(MetricsReport {
        per_user,
        per_bs,
        per_ec,
        objective: objective(state, sc),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    BsPower,
    EcPower,
    Fronthaul,
    CloudCapacity,
    EcCapacity,
    Rate,
    Delay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSlack {
    pub id: String,
    pub family: ConstraintFamily,
    /// Raw slack, >= 0 when satisfied.
    pub slack: f64,
    /// Slack divided by the constraint's natural scale.
    pub normalized_slack: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub entries: Vec<ConstraintSlack>,
    pub violated: Vec<String>,
    pub pass: bool,
    pub tolerance: f64,
}

fn clamp_finite(x: f64) -> f64 {
    if x.is_nan() {
        -1e300
    } else {
        x.clamp(-1e300, 1e300)
    }
}

/// Audits a state against every constraint of the original problem: rate
/// achievability, fronthaul capacity (thresholded l0), per-BS and per-EC
/// power, computation capacities, and per-user delay. Reports slacks and
/// never fails on infeasibility.
pub fn audit(
    state: &VariableState,
    sc: &NetworkScenario,
    eps_rel: f64,
) -> Result<FeasibilityReport, ModelError> {
    state.check_dims(sc)?;
    let mut entries = Vec::new();
    let mut push = |id: String, family: ConstraintFamily, slack: f64, scale: f64| {
        let normalized = clamp_finite(slack / scale.max(1e-300));
        entries.push(ConstraintSlack {
            id,
            family,
            slack: clamp_finite(slack),
            normalized_slack: normalized,
            ok: normalized >= -eps_rel,
        });
    };

    for b in 0..sc.num_bs() {
        let p = power_bs(b, state, sc);
        push(
            format!("bs_power[{b}]"),
            ConstraintFamily::BsPower,
            sc.budgets.bs_power_w - p,
            sc.budgets.bs_power_w,
        );
    }
    for e in 0..sc.num_ec() {
        let p = power_ec(e, state, sc);
        let counted = if sc.budgets.include_operation_power_in_constraint {
            p.total_w
        } else {
            p.transmit_w + p.computation_w
        };
        push(
            format!("ec_power[{e}]"),
            ConstraintFamily::EcPower,
            sc.budgets.ec_power_w - counted,
            sc.budgets.ec_power_w,
        );
    }
    let threshold = default_activity_threshold(sc);
    for b in 0..sc.num_bs() {
        let load = fronthaul_load(b, state, sc, threshold);
        push(
            format!("fronthaul[{b}]"),
            ConstraintFamily::Fronthaul,
            sc.budgets.fronthaul_bps - load,
            sc.budgets.fronthaul_bps,
        );
    }
    let cloud_cycles: f64 = sc.central_users().iter().map(|&k| state.cycles[k]).sum();
    push(
        "cloud_capacity".into(),
        ConstraintFamily::CloudCapacity,
        sc.budgets.cloud_cycles - cloud_cycles,
        sc.budgets.cloud_cycles,
    );
    for e in 0..sc.num_ec() {
        let used: f64 = sc.edge_users_of(e).iter().map(|&k| state.cycles[k]).sum();
        push(
            format!("ec_capacity[{e}]"),
            ConstraintFamily::EcCapacity,
            sc.budgets.ec_cycles - used,
            sc.budgets.ec_cycles,
        );
    }
    for k in 0..sc.num_users() {
        let bound = rate_bound(k, state, sc)?;
        push(
            format!("rate[{k}]"),
            ConstraintFamily::Rate,
            bound - state.rates[k],
            bound.max(state.rates[k]).max(1.0),
        );
    }
    for k in 0..sc.num_users() {
        let slack = match delay(k, state, sc) {
            Ok(d) => sc.tasks[k].max_delay_s - d.total_s,
            Err(_) => -1e300,
        };
        push(
            format!("delay[{k}]"),
            ConstraintFamily::Delay,
            slack,
            sc.tasks[k].max_delay_s,
        );
    }

    let violated: Vec<String> = entries
        .iter()
        .filter(|c| !c.ok)
        .map(|c| c.id.clone())
        .collect();
    let pass = violated.is_empty();
    Ok(FeasibilityReport {
        entries,
        violated,
        pass,
        tolerance: eps_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{
        generate_scenario, BudgetParams, ChannelParams, TaskParams, TopologyParams,
    };
    use approx::assert_relative_eq;

    /// Hand-built scenario: `n_users` users, one single-antenna BS, flat unit
    /// channels, unit noise. Keeps the metric examples readable.
    fn toy_scenario(n_users: usize) -> NetworkScenario {
        let tp = TopologyParams {
            num_bs: 1,
            bs_antennas: 1,
            num_uav: 0,
            num_edge_users: 0,
            num_users: n_users,
            bs_positions: Some(vec![[0.0, 0.0]]),
            ..Default::default()
        };
        let mut sc = generate_scenario(
            &tp,
            &ChannelParams::default(),
            &TaskParams::default(),
            &BudgetParams::default(),
            0,
        )
        .unwrap();
        for ch in &mut sc.channels {
            for c in &mut ch.coeffs {
                *c = Complex64::new(1.0, 0.0);
            }
        }
        sc.noise_power_w = 1.0;
        sc
    }

    #[test]
    fn sinr_zero_beam() {
        let sc = toy_scenario(1);
        let state = VariableState::zeros(&sc);
        assert_eq!(sinr(0, &state, &sc).unwrap(), 0.0);
    }

    #[test]
    fn sinr_single_user_no_interference() {
        let sc = toy_scenario(1);
        let mut state = VariableState::zeros(&sc);
        state.beams[0][0] = Complex64::new(2.0, 0.0); // h^dagger w = 2
        assert_relative_eq!(sinr(0, &state, &sc).unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn sinr_two_users_hand_example() {
        let sc = toy_scenario(2);
        let mut state = VariableState::zeros(&sc);
        state.beams[0][0] = Complex64::new(2.0, 0.0); // |h_1^d w_1|^2 = 4
        state.beams[1][0] = Complex64::new(1.0, 0.0); // |h_1^d w_2|^2 = 1
        assert_relative_eq!(sinr(0, &state, &sc).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn sinr_phase_invariance() {
        let sc = toy_scenario(3);
        let mut state = VariableState::zeros(&sc);
        state.beams[0][0] = Complex64::new(0.3, -0.4);
        state.beams[1][0] = Complex64::new(-0.2, 0.9);
        state.beams[2][0] = Complex64::new(0.05, 0.11);
        let base = sinr(1, &state, &sc).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let mut rotated = state.clone();
        rotated.beams[1][0] *= phase;
        assert_relative_eq!(sinr(1, &rotated, &sc).unwrap(), base, max_relative = 1e-12);
        // Rotating every beamformer leaves all SINRs unchanged too.
        let mut all = state.clone();
        for w in &mut all.beams {
            for c in w.iter_mut() {
                *c *= phase;
            }
        }
        for k in 0..3 {
            assert_relative_eq!(
                sinr(k, &all, &sc).unwrap(),
                sinr(k, &state, &sc).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    fn edge_scenario() -> NetworkScenario {
        generate_scenario(
            &TopologyParams { num_users: 4, ..Default::default() },
            &ChannelParams::default(),
            &TaskParams::default(),
            &BudgetParams::default(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn ec_power_computation_term() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        let users = sc.edge_users_of(0);
        assert_eq!(users.len(), 1);
        state.cycles[users[0]] = 1e9;
        let p = power_ec(0, &state, &sc);
        // s_e (sum f)^mu = 1e-28 * (1e9)^3
        assert_relative_eq!(p.computation_w, 0.1, max_relative = 1e-12);
        assert_relative_eq!(p.total_w, p.transmit_w + p.computation_w + p.operation_w);
    }

    #[test]
    fn ec_power_idle_is_operation_only() {
        let sc = edge_scenario();
        let state = VariableState::zeros(&sc);
        let p = power_ec(0, &state, &sc);
        assert_eq!(p.transmit_w, 0.0);
        assert_eq!(p.computation_w, 0.0);
        assert_relative_eq!(p.total_w, sc.budgets.ec_operation_power_w);
    }

    #[test]
    fn ec_power_transmit_sum() {
        let mut sc = edge_scenario();
        sc.budgets.ec_operation_power_w = 0.0;
        let mut state = VariableState::zeros(&sc);
        // Two users on EC 0 with ||w||^2 = 0.01 each.
        let users = sc.edge_users_of(0);
        let k = users[0];
        state.beams[k][0] = Complex64::new(0.1, 0.0);
        let k2 = sc.edge_users_of(1)[0];
        sc.association[k2] = Entity::Edge(0);
        let mut state = VariableState::zeros(&sc);
        state.beams[k][0] = Complex64::new(0.1, 0.0);
        state.beams[k2][0] = Complex64::new(0.0, 0.1);
        let p = power_ec(0, &state, &sc);
        assert_relative_eq!(p.total_w, 0.02, max_relative = 1e-12);
    }

    #[test]
    fn delay_reference_values() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        let central = sc.central_users()[0];
        state.cycles[central] = 1e9;
        state.rates[central] = 1e6;
        let d = delay(central, &state, &sc).unwrap();
        assert_relative_eq!(d.total_s, 0.20045, max_relative = 1e-12);
        let edge = sc.edge_users_of(0)[0];
        state.cycles[edge] = 1e9;
        state.rates[edge] = 1e6;
        let d = delay(edge, &state, &sc).unwrap();
        assert_relative_eq!(d.total_s, 0.2, max_relative = 1e-12);
    }

    #[test]
    fn delay_limit_is_fronthaul_term() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        let central = sc.central_users()[0];
        state.cycles[central] = 1e30;
        state.rates[central] = 1e30;
        let d = delay(central, &state, &sc).unwrap();
        assert!((d.total_s - 4.5e-4).abs() < 1e-12);
    }

    #[test]
    fn delay_rejects_nonpositive_inputs() {
        let sc = edge_scenario();
        let state = VariableState::zeros(&sc);
        assert!(delay(0, &state, &sc).is_err());
    }

    #[test]
    fn delay_monotone_in_rate_and_cycles() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        let k = sc.central_users()[0];
        state.cycles[k] = 1e8;
        state.rates[k] = 1e5;
        let base = delay(k, &state, &sc).unwrap().total_s;
        state.rates[k] = 2e5;
        let faster_rate = delay(k, &state, &sc).unwrap().total_s;
        assert!(faster_rate < base);
        state.cycles[k] = 2e8;
        let faster_cpu = delay(k, &state, &sc).unwrap().total_s;
        assert!(faster_cpu < faster_rate);
    }

    #[test]
    fn fronthaul_load_thresholding() {
        let sc = toy_scenario(2);
        let mut state = VariableState::zeros(&sc);
        assert_eq!(fronthaul_load(0, &state, &sc, 1e-9), 0.0);
        state.beams[0][0] = Complex64::new(1e-3f64.sqrt(), 0.0); // 1e-3 W, active
        state.rates[0] = 5e6;
        assert_relative_eq!(fronthaul_load(0, &state, &sc, 1e-9), 5e6);
        state.beams[1][0] = Complex64::new(1e-6, 0.0); // 1e-12 W, inactive
        state.rates[1] = 1e6;
        assert_relative_eq!(fronthaul_load(0, &state, &sc, 1e-9), 1e6 * 0.0 + 5e6);
    }

    #[test]
    fn audit_counts_every_constraint_once() {
        let sc = edge_scenario();
        let state = VariableState::zeros(&sc);
        let report = audit(&state, &sc, 1e-6).unwrap();
        let b = sc.num_bs();
        let e = sc.num_ec();
        let k = sc.num_users();
        assert_eq!(report.entries.len(), b + e + b + 1 + e + k + k);
    }

    #[test]
    fn audit_flags_rate_violation_for_zero_beams() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        for k in 0..sc.num_users() {
            state.rates[k] = 10.0;
            state.cycles[k] = 1e6;
        }
        let report = audit(&state, &sc, 1e-6).unwrap();
        assert!(!report.pass);
        assert!(report.violated.iter().any(|v| v.starts_with("rate[")));
    }

    #[test]
    fn audit_flags_capacity_violation() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        let e0 = sc.edge_users_of(0)[0];
        state.cycles[e0] = sc.budgets.ec_cycles * 2.0;
        let report = audit(&state, &sc, 1e-6).unwrap();
        assert!(report
            .violated
            .iter()
            .any(|v| v == "ec_capacity[0]"));
    }

    #[test]
    fn objective_is_weighted_sum_of_rates() {
        let mut sc = edge_scenario();
        sc.tasks[1].weight = 2.0;
        let mut state = VariableState::zeros(&sc);
        state.rates = vec![1.0, 2.0, 3.0, 4.0];
        assert_relative_eq!(objective(&state, &sc), 1.0 + 4.0 + 3.0 + 4.0);
        let m = metrics(&state, &sc).unwrap();
        assert_eq!(m.objective, objective(&state, &sc));
    }

    #[test]
    fn state_json_roundtrip() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        state.beams[0][0] = Complex64::new(0.1, -0.2);
        state.rates[0] = 123.0;
        let json = serde_json::to_string(&state).unwrap();
        let back: VariableState = serde_json::from_str(&json).unwrap();
        assert_eq!(state, back);
    }

    #[test]
    fn floored_cycles_are_integral() {
        let sc = edge_scenario();
        let mut state = VariableState::zeros(&sc);
        state.cycles = vec![1.7e3, 2.2, 9.99, 5.0];
        let floored = state.with_floored_cycles();
        for f in &floored.cycles {
            assert_eq!(*f, f.floor());
            assert!(*f >= 1.0);
        }
    }
}
