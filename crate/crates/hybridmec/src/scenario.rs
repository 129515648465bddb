//! Deterministic (seeded) synthesis of hybrid cloud/MEC network instances.
//!
//! A scenario bundles the topology (base stations, UAV-mounted edge clouds,
//! users), one channel realization per link, the per-user task parameters,
//! and all resource budgets. Everything downstream (metrics, reformulations,
//! protocols) consumes a [`NetworkScenario`] and never re-draws randomness.
//!
//! All stored quantities are linear SI units (watts, Hz, bits/s, cycles/s,
//! seconds, meters). dB / dBm appear only in the parameter structs, which are
//! the configuration boundary.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light, m/s.
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pathloss domain error: {0}")]
    Domain(String),
    #[error("hexagonal layout requires exactly 7 base stations, got {0}; pass explicit positions instead")]
    HexLayout(usize),
    #[error("num_edge_users ({edge}) exceeds num_users ({users})")]
    TooManyEdgeUsers { edge: usize, users: usize },
}

/// Serializes `Vec<Complex64>` as a flat interleaved `[re0, im0, re1, im1, ...]` array.
mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let flat: Vec<f64> = v.iter().flat_map(|c| [c.re, c.im]).collect();
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let flat = Vec::<f64>::deserialize(d)?;
        if flat.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd interleaved channel length"));
        }
        Ok(flat.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Network geometry and antenna counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TopologyParams {
    pub num_bs: usize,
    /// Inter-BS distance in meters (hex ring radius).
    pub inter_bs_distance: f64,
    /// Antennas per BS (L_c).
    pub bs_antennas: usize,
    /// Number of UAV-mounted edge clouds (E).
    pub num_uav: usize,
    /// Antennas per UAV (L_e).
    pub uav_antennas: usize,
    pub uav_altitude: f64,
    /// Total number of users (K).
    pub num_users: usize,
    /// Users placed at the cell edge and served by UAVs; defaults to one per UAV.
    pub num_edge_users: usize,
    /// Horizontal placement radius of edge users around their UAV, meters.
    pub edge_user_radius: f64,
    /// Radius of the disk central users are drawn from; derived from the BS
    /// layout when absent.
    pub coverage_radius: Option<f64>,
    /// Explicit BS positions (meters). Required whenever `num_bs != 7`.
    pub bs_positions: Option<Vec<[f64; 2]>>,
    /// Explicit UAV ground positions; derived cell-edge sites when absent.
    pub uav_positions: Option<Vec<[f64; 2]>>,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self {
            num_bs: 7,
            inter_bs_distance: 400.0,
            bs_antennas: 3,
            num_uav: 2,
            uav_antennas: 1,
            uav_altitude: 150.0,
            num_users: 8,
            num_edge_users: 2,
            edge_user_radius: 100.0,
            coverage_radius: None,
            bs_positions: None,
            uav_positions: None,
        }
    }
}

impl TopologyParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.bs_antennas < 1 || self.uav_antennas < 1 {
            return Err(ScenarioError::InvalidParameter(
                "antenna counts must be >= 1".into(),
            ));
        }
        if self.num_edge_users > self.num_users {
            return Err(ScenarioError::TooManyEdgeUsers {
                edge: self.num_edge_users,
                users: self.num_users,
            });
        }
        if self.num_edge_users > 0 && self.num_uav == 0 {
            return Err(ScenarioError::InvalidParameter(
                "edge users require at least one UAV".into(),
            ));
        }
        if !(self.inter_bs_distance > 0.0) || !(self.uav_altitude > 0.0) {
            return Err(ScenarioError::InvalidParameter(
                "distances and altitude must be positive".into(),
            ));
        }
        if let Some(p) = &self.bs_positions {
            if p.len() != self.num_bs {
                return Err(ScenarioError::InvalidParameter(format!(
                    "bs_positions has {} entries for num_bs={}",
                    p.len(),
                    self.num_bs
                )));
            }
        }
        if let Some(p) = &self.uav_positions {
            if p.len() != self.num_uav {
                return Err(ScenarioError::InvalidParameter(format!(
                    "uav_positions has {} entries for num_uav={}",
                    p.len(),
                    self.num_uav
                )));
            }
        }
        Ok(())
    }
}

/// Propagation and noise parameters. dB/dBm here, converted on generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelParams {
    pub noise_psd_dbm_hz: f64,
    /// Transmission bandwidth tau, Hz.
    pub bandwidth_hz: f64,
    pub shadowing_std_db: f64,
    /// Excess pathloss under line of sight, dB.
    pub eta_los_db: f64,
    /// Excess pathloss without line of sight, dB.
    pub eta_nlos_db: f64,
    /// Environment constants of the LoS-probability sigmoid (urban defaults).
    pub los_env_a: f64,
    pub los_env_b: f64,
    /// Carrier frequency for the UAV free-space term, Hz.
    pub carrier_freq_hz: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            noise_psd_dbm_hz: -134.0,
            bandwidth_hz: 1e7,
            shadowing_std_db: 8.0,
            eta_los_db: 4.0,
            eta_nlos_db: 35.0,
            los_env_a: 9.61,
            los_env_b: 0.16,
            carrier_freq_hz: 2e9,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(ScenarioError::InvalidParameter("bandwidth must be > 0".into()));
        }
        if self.shadowing_std_db < 0.0 {
            return Err(ScenarioError::InvalidParameter(
                "shadowing std must be >= 0".into(),
            ));
        }
        if self.eta_nlos_db < self.eta_los_db {
            return Err(ScenarioError::InvalidParameter(
                "eta_nlos must be >= eta_los".into(),
            ));
        }
        Ok(())
    }
}

/// Per-user computation task description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TaskParams {
    /// Total cycles required to process the task (F_k).
    pub cycles_per_task: f64,
    /// Task data size in bits (D_k).
    pub data_size_bits: f64,
    /// Maximum tolerable delay in seconds (t_k).
    pub max_delay_s: f64,
    /// Worst-case fronthaul delay in seconds (Lambda_k), central users only.
    pub fronthaul_delay_s: f64,
    /// Rate weight alpha_k in the objective.
    pub weight: f64,
}

impl Default for TaskParams {
    fn default() -> Self {
        Self {
            cycles_per_task: 1e8,
            data_size_bits: 1e5,
            max_delay_s: 0.6,
            fronthaul_delay_s: 4.5e-4,
            weight: 1.0,
        }
    }
}

impl TaskParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let all_pos = self.cycles_per_task > 0.0
            && self.data_size_bits > 0.0
            && self.max_delay_s > 0.0
            && self.fronthaul_delay_s > 0.0
            && self.weight > 0.0;
        if !all_pos {
            return Err(ScenarioError::InvalidParameter(
                "task parameters must be strictly positive".into(),
            ));
        }
        if self.max_delay_s <= self.fronthaul_delay_s {
            return Err(ScenarioError::InvalidParameter(
                "max_delay must exceed the fronthaul delay".into(),
            ));
        }
        Ok(())
    }
}

/// Transmit power, fronthaul, and computation budgets. dBm at this boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetParams {
    pub bs_power_dbm: f64,
    pub ec_power_dbm: f64,
    /// Per-BS fronthaul capacity R_b^max, bits/s.
    pub fronthaul_bps: f64,
    /// Central-cloud computation capacity, cycles/s.
    pub cloud_cycles: f64,
    /// Per-EC computation capacity, cycles/s.
    pub ec_cycles: f64,
    /// CPU power-model coefficient s_e.
    pub cpu_coeff: f64,
    /// CPU power-model exponent mu_e.
    pub cpu_exponent: f64,
    /// Fixed operational power Q_e of an EC, watts.
    pub ec_operation_power_w: f64,
    /// Count Q_e inside the EC power constraint. The published per-EC budget
    /// (17 dBm) is smaller than Q_e = 100 W, so including it makes every
    /// instance infeasible; the default keeps Q_e a reporting-only term.
    pub include_operation_power_in_constraint: bool,
}

impl Default for BudgetParams {
    fn default() -> Self {
        Self {
            bs_power_dbm: 24.0,
            ec_power_dbm: 17.0,
            fronthaul_bps: 5e7,
            cloud_cycles: 5e10,
            ec_cycles: 1e9,
            cpu_coeff: 1e-28,
            cpu_exponent: 3.0,
            ec_operation_power_w: 100.0,
            include_operation_power_in_constraint: false,
        }
    }
}

impl BudgetParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.fronthaul_bps > 0.0
            && self.cloud_cycles > 0.0
            && self.ec_cycles > 0.0
            && self.cpu_coeff > 0.0
            && self.cpu_exponent >= 1.0
            && self.ec_operation_power_w >= 0.0)
        {
            return Err(ScenarioError::InvalidParameter(
                "budgets must be positive (cpu_exponent >= 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn to_si(&self) -> Budgets {
        Budgets {
            bs_power_w: dbm_to_watts(self.bs_power_dbm),
            ec_power_w: dbm_to_watts(self.ec_power_dbm),
            fronthaul_bps: self.fronthaul_bps,
            cloud_cycles: self.cloud_cycles,
            ec_cycles: self.ec_cycles,
            cpu_coeff: self.cpu_coeff,
            cpu_exponent: self.cpu_exponent,
            ec_operation_power_w: self.ec_operation_power_w,
            include_operation_power_in_constraint: self.include_operation_power_in_constraint,
        }
    }
}

/// Budgets in linear SI units, as stored on a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub bs_power_w: f64,
    pub ec_power_w: f64,
    pub fronthaul_bps: f64,
    pub cloud_cycles: f64,
    pub ec_cycles: f64,
    pub cpu_coeff: f64,
    pub cpu_exponent: f64,
    pub ec_operation_power_w: f64,
    pub include_operation_power_in_constraint: bool,
}

/// Serving entity of a user: the central cloud or one edge cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entity {
    Cloud,
    Edge(usize),
}

/// One channel realization from every BS and UAV to a single user, stacked as
/// `[h_{1,k}, ..., h_{B,k}, h~_{1,k}, ..., h~_{E,k}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateChannel {
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
}

/// Immutable problem instance: topology, channels, association, tasks, budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkScenario {
    pub topology: TopologyParams,
    pub channel_params: ChannelParams,
    pub bs_positions: Vec<[f64; 2]>,
    /// UAV ground projections; all UAVs fly at `topology.uav_altitude`.
    pub uav_positions: Vec<[f64; 2]>,
    pub user_positions: Vec<[f64; 2]>,
    pub association: Vec<Entity>,
    pub channels: Vec<AggregateChannel>,
    /// Receiver noise power sigma^2, watts.
    pub noise_power_w: f64,
    pub tasks: Vec<TaskParams>,
    pub budgets: Budgets,
}

impl NetworkScenario {
    pub fn num_users(&self) -> usize {
        self.association.len()
    }

    pub fn num_bs(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn num_ec(&self) -> usize {
        self.uav_positions.len()
    }

    /// Length of the aggregate channel vector, B*L_c + E*L_e.
    pub fn aggregate_len(&self) -> usize {
        self.num_bs() * self.topology.bs_antennas + self.num_ec() * self.topology.uav_antennas
    }

    /// Index range of BS b inside the aggregate channel vector.
    pub fn bs_block(&self, b: usize) -> std::ops::Range<usize> {
        let l = self.topology.bs_antennas;
        b * l..(b + 1) * l
    }

    /// Index range of UAV e inside the aggregate channel vector.
    pub fn uav_block(&self, e: usize) -> std::ops::Range<usize> {
        let off = self.num_bs() * self.topology.bs_antennas;
        let l = self.topology.uav_antennas;
        off + e * l..off + (e + 1) * l
    }

    /// Aggregate-channel range covering a user's serving entity: the whole
    /// BS stack for cloud users, one UAV block for edge users.
    pub fn serving_block(&self, entity: Entity) -> std::ops::Range<usize> {
        match entity {
            Entity::Cloud => 0..self.num_bs() * self.topology.bs_antennas,
            Entity::Edge(e) => self.uav_block(e),
        }
    }

    /// Number of beamforming coefficients a user owns (complex).
    pub fn beam_len(&self, k: usize) -> usize {
        self.serving_block(self.association[k]).len()
    }

    pub fn central_users(&self) -> Vec<usize> {
        (0..self.num_users())
            .filter(|&k| self.association[k] == Entity::Cloud)
            .collect()
    }

    pub fn edge_users_of(&self, e: usize) -> Vec<usize> {
        (0..self.num_users())
            .filter(|&k| self.association[k] == Entity::Edge(e))
            .collect()
    }

    pub fn users_of(&self, entity: Entity) -> Vec<usize> {
        match entity {
            Entity::Cloud => self.central_users(),
            Entity::Edge(e) => self.edge_users_of(e),
        }
    }

    /// All entities in fixed order: cloud first, then each edge cloud.
    pub fn entities(&self) -> Vec<Entity> {
        std::iter::once(Entity::Cloud)
            .chain((0..self.num_ec()).map(Entity::Edge))
            .collect()
    }

    /// Checks the user-set partition: every user belongs to exactly one entity
    /// and edge indices are in range.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut seen = 0usize;
        for ent in self.entities() {
            seen += self.users_of(ent).len();
        }
        if seen != self.num_users() {
            return Err(ScenarioError::InvalidParameter(
                "user association does not partition the user set".into(),
            ));
        }
        for a in &self.association {
            if let Entity::Edge(e) = a {
                if *e >= self.num_ec() {
                    return Err(ScenarioError::InvalidParameter(format!(
                        "association references EC {e} out of {}",
                        self.num_ec()
                    )));
                }
            }
        }
        if !(self.noise_power_w > 0.0) {
            return Err(ScenarioError::InvalidParameter("noise power must be > 0".into()));
        }
        Ok(())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// 3GPP macro pathloss `128.1 + 37.6 log10(d)` with d in kilometers.
pub fn pathloss_bs(d_km: f64) -> Result<f64, ScenarioError> {
    if !(d_km > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "BS pathloss needs d > 0, got {d_km}"
        )));
    }
    Ok(128.1 + 37.6 * d_km.log10())
}

/// Expected air-to-ground pathloss: free space at the slant distance plus the
/// LoS-probability-weighted excess component.
pub fn pathloss_uav(
    horizontal_m: f64,
    altitude_m: f64,
    cp: &ChannelParams,
) -> Result<f64, ScenarioError> {
    if !(altitude_m > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "UAV pathloss needs altitude > 0, got {altitude_m}"
        )));
    }
    if horizontal_m < 0.0 {
        return Err(ScenarioError::Domain("horizontal distance must be >= 0".into()));
    }
    let slant = (horizontal_m * horizontal_m + altitude_m * altitude_m).sqrt();
    let theta_deg = altitude_m.atan2(horizontal_m).to_degrees();
    let p_los = 1.0
        / (1.0 + cp.los_env_a * (-cp.los_env_b * (theta_deg - cp.los_env_a)).exp());
    let fspl = 20.0 * slant.log10() + 20.0 * cp.carrier_freq_hz.log10()
        + 20.0 * (4.0 * std::f64::consts::PI / SPEED_OF_LIGHT).log10();
    Ok(fspl + p_los * cp.eta_los_db + (1.0 - p_los) * cp.eta_nlos_db)
}

/// Receiver noise power in watts from PSD (dBm/Hz) and bandwidth.
pub fn noise_power(cp: &ChannelParams) -> f64 {
    dbm_to_watts(cp.noise_psd_dbm_hz + 10.0 * cp.bandwidth_hz.log10())
}

/// Draws one channel vector: log-normal shadowing (one draw per link) on top
/// of the pathloss, times i.i.d. unit complex Gaussian fading per antenna.
pub fn draw_channel<R: Rng>(
    pl_db: f64,
    shadow_std_db: f64,
    len: usize,
    rng: &mut R,
) -> Vec<Complex64> {
    let shadow_dist = Normal::new(0.0, shadow_std_db).expect("shadow std >= 0");
    let shadow = shadow_dist.sample(rng);
    let amplitude = 10f64.powf(-(pl_db + shadow) / 20.0);
    let fading = Normal::new(0.0, (0.5f64).sqrt()).expect("fixed std");
    (0..len)
        .map(|_| {
            let re = fading.sample(rng);
            let im = fading.sample(rng);
            amplitude * Complex64::new(re, im)
        })
        .collect()
}

fn hex_layout(d: f64) -> Vec<[f64; 2]> {
    let mut pos = vec![[0.0, 0.0]];
    for i in 0..6 {
        let ang = std::f64::consts::PI / 3.0 * i as f64;
        pos.push([d * ang.cos(), d * ang.sin()]);
    }
    pos
}

/// Cell-edge UAV sites: midpoints between angularly consecutive non-central
/// BSs, falling back to a circle of radius `d/2` when no ring exists.
fn uav_sites(bs: &[[f64; 2]], d: f64, count: usize) -> Vec<[f64; 2]> {
    if count == 0 {
        return vec![];
    }
    let cx = bs.iter().map(|p| p[0]).sum::<f64>() / bs.len() as f64;
    let cy = bs.iter().map(|p| p[1]).sum::<f64>() / bs.len() as f64;
    let mut ring: Vec<[f64; 2]> = bs
        .iter()
        .copied()
        .filter(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt() > 1e-9)
        .collect();
    ring.sort_by(|a, b| {
        let aa = (a[1] - cy).atan2(a[0] - cx);
        let ab = (b[1] - cy).atan2(b[0] - cx);
        aa.partial_cmp(&ab).unwrap()
    });
    let sites: Vec<[f64; 2]> = if ring.len() >= 2 {
        (0..ring.len())
            .map(|i| {
                let a = ring[i];
                let b = ring[(i + 1) % ring.len()];
                [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
            })
            .collect()
    } else {
        vec![]
    };
    if count <= sites.len() {
        return sites[..count].to_vec();
    }
    // More UAVs than midpoint sites: spread them on the cell-edge circle.
    let radius = if sites.is_empty() {
        d / 2.0
    } else {
        sites
            .iter()
            .map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt())
            .sum::<f64>()
            / sites.len() as f64
    };
    (0..count)
        .map(|e| {
            let ang = 2.0 * std::f64::consts::PI * e as f64 / count as f64
                + std::f64::consts::PI / 6.0;
            [cx + radius * ang.cos(), cy + radius * ang.sin()]
        })
        .collect()
}

/// Builds one problem instance. Deterministic for a fixed seed: the position
/// and channel draw order is fixed (edge users first, then central users;
/// per user all BS links, then all UAV links).
pub fn generate_scenario(
    tp: &TopologyParams,
    cp: &ChannelParams,
    task: &TaskParams,
    budgets: &BudgetParams,
    seed: u64,
) -> Result<NetworkScenario, ScenarioError> {
    tp.validate()?;
    cp.validate()?;
    task.validate()?;
    budgets.validate()?;

    let bs_positions = match &tp.bs_positions {
        Some(p) => p.clone(),
        None => {
            if tp.num_bs != 7 {
                return Err(ScenarioError::HexLayout(tp.num_bs));
            }
            hex_layout(tp.inter_bs_distance)
        }
    };
    let uav_positions = match &tp.uav_positions {
        Some(p) => p.clone(),
        None => uav_sites(&bs_positions, tp.inter_bs_distance, tp.num_uav),
    };

    let cx = bs_positions.iter().map(|p| p[0]).sum::<f64>() / bs_positions.len() as f64;
    let cy = bs_positions.iter().map(|p| p[1]).sum::<f64>() / bs_positions.len() as f64;
    let max_bs_dist = bs_positions
        .iter()
        .map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt())
        .fold(0.0, f64::max);
    let coverage = tp
        .coverage_radius
        .unwrap_or(max_bs_dist + 0.5 * tp.inter_bs_distance);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut user_positions = Vec::with_capacity(tp.num_users);
    let mut association = Vec::with_capacity(tp.num_users);
    for j in 0..tp.num_edge_users {
        let e = j % tp.num_uav;
        let radius = tp.edge_user_radius * rng.gen::<f64>().sqrt();
        let ang = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        user_positions.push([
            uav_positions[e][0] + radius * ang.cos(),
            uav_positions[e][1] + radius * ang.sin(),
        ]);
        association.push(Entity::Edge(e));
    }
    for _ in tp.num_edge_users..tp.num_users {
        let radius = coverage * rng.gen::<f64>().sqrt();
        let ang = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        user_positions.push([cx + radius * ang.cos(), cy + radius * ang.sin()]);
        association.push(Entity::Cloud);
    }

    let mut channels = Vec::with_capacity(tp.num_users);
    for pos in &user_positions {
        let mut coeffs = Vec::with_capacity(tp.num_bs * tp.bs_antennas + tp.num_uav * tp.uav_antennas);
        for b in &bs_positions {
            let d_m = ((pos[0] - b[0]).powi(2) + (pos[1] - b[1]).powi(2)).sqrt().max(1.0);
            let pl = pathloss_bs(d_m / 1000.0)?;
            coeffs.extend(draw_channel(pl, cp.shadowing_std_db, tp.bs_antennas, &mut rng));
        }
        for u in &uav_positions {
            let d_m = ((pos[0] - u[0]).powi(2) + (pos[1] - u[1]).powi(2)).sqrt();
            let pl = pathloss_uav(d_m, tp.uav_altitude, cp)?;
            coeffs.extend(draw_channel(pl, cp.shadowing_std_db, tp.uav_antennas, &mut rng));
        }
        channels.push(AggregateChannel { coeffs });
    }

    let sc = NetworkScenario {
        topology: tp.clone(),
        channel_params: cp.clone(),
        bs_positions,
        uav_positions,
        user_positions,
        association,
        channels,
        noise_power_w: noise_power(cp),
        tasks: vec![*task; tp.num_users],
        budgets: budgets.to_si(),
    };
    sc.validate()?;
    Ok(sc)
}
