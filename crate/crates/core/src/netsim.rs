//! Seeded campaign engine: node placement, mobility, beacons and metrics.
//!
//! Every random draw comes from a ChaCha stream derived from the master seed
//! and a fixed purpose id, so changing one aspect of a run (say, the number
//! of flows) never perturbs another (node placement).

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance, wrap_pi, Angle, Position};
use crate::routing::{route_packet, NetworkSnapshot, Outcome, Packet, Protocol, RouteResult, Vehicle, VehicleId, DEFAULT_TTL};

const PLACEMENT_STREAM: u64 = 1;
const MOTION_STREAM: u64 = 2;
const FLOW_STREAM: u64 = 3;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rectangular field `[0, width] × [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Field {
    pub width: f64,
    pub height: f64,
}

impl Field {
    pub fn contains(&self, p: Position) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub field_width: f64,
    pub field_height: f64,
    /// Nodes per square meter; ignored when `node_count` is set.
    pub density: f64,
    pub node_count: Option<u32>,
    pub tx_range: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub beacon_interval: f64,
    pub duration: f64,
    pub time_step: f64,
    pub protocol: Protocol,
    pub flows: u32,
    pub seed: u64,
    pub ttl: u32,
    pub per_hop_latency_ms: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            field_width: 1000.0,
            field_height: 1000.0,
            density: 0.0002,
            node_count: None,
            tx_range: 250.0,
            speed_min: 5.0,
            speed_max: 20.0,
            beacon_interval: 1.0,
            duration: 60.0,
            time_step: 0.5,
            protocol: Protocol::Dlar,
            flows: 100,
            seed: 1,
            ttl: DEFAULT_TTL,
            per_hop_latency_ms: 2.0,
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be a finite value > 0 (got {value})")))
    }
}

impl SimConfig {
    pub fn field(&self) -> Field {
        Field { width: self.field_width, height: self.field_height }
    }

    pub fn validate(&self) -> Result<()> {
        positive("field_width", self.field_width)?;
        positive("field_height", self.field_height)?;
        positive("density", self.density)?;
        positive("tx_range", self.tx_range)?;
        positive("beacon_interval", self.beacon_interval)?;
        positive("duration", self.duration)?;
        positive("time_step", self.time_step)?;
        if !(self.per_hop_latency_ms >= 0.0) || !self.per_hop_latency_ms.is_finite() {
            return Err(Error::invalid("per_hop_latency_ms", "must be finite and >= 0"));
        }
        if !(self.speed_min >= 0.0) || !self.speed_min.is_finite() {
            return Err(Error::invalid("speed_min", "must be finite and >= 0"));
        }
        if !self.speed_max.is_finite() || self.speed_min > self.speed_max {
            return Err(Error::invalid("speed_max", "must be finite and >= speed_min"));
        }
        if self.time_step > self.beacon_interval {
            return Err(Error::invalid("time_step", "must not exceed beacon_interval"));
        }
        if self.node_count == Some(0) {
            return Err(Error::invalid("node_count", "must be at least 1"));
        }
        if self.ttl == 0 {
            return Err(Error::invalid("ttl", "must be at least 1"));
        }
        Ok(())
    }

    /// Expected neighbors per node away from the field edges: `λπR²`.
    pub fn mean_neighbors(&self) -> f64 {
        self.density * PI * self.tx_range * self.tx_range
    }

    /// Density giving `neighbors` expected neighbors at this range.
    pub fn density_for_mean_neighbors(&self, neighbors: f64) -> f64 {
        neighbors / (PI * self.tx_range * self.tx_range)
    }
}

/// Places vehicles uniformly over the field.
///
/// The vehicle count is `node_count` when set, otherwise a Poisson draw with
/// mean `density × area`. Ids run `0..n`.
pub fn generate_nodes(config: &SimConfig) -> Result<NetworkSnapshot> {
    config.validate()?;
    let mut placement = stream_rng(config.seed, PLACEMENT_STREAM);
    let mut motion = stream_rng(config.seed, MOTION_STREAM);
    let n = match config.node_count {
        Some(n) => n as u64,
        None => {
            let mean = config.density * config.field().area();
            let poisson = Poisson::new(mean).map_err(|e| Error::invalid("density", e.to_string()))?;
            poisson.sample(&mut placement) as u64
        }
    };
    let vehicles = (0..n)
        .map(|i| {
            let x = placement.random_range(0.0..=config.field_width);
            let y = placement.random_range(0.0..=config.field_height);
            let heading = match motion.random_range(-PI..PI) {
                h if h == -PI => PI,
                h => h,
            };
            let speed = if config.speed_min == config.speed_max {
                config.speed_min
            } else {
                motion.random_range(config.speed_min..=config.speed_max)
            };
            Vehicle::new(i as u32, Position::new(x, y), speed, Angle::from_radians(heading))
        })
        .collect();
    NetworkSnapshot::new(vehicles, config.tx_range)
}

/// Folds `x` back into `[0, max]`, returning the folded value and whether
/// the direction of travel along this axis flipped.
fn reflect(mut x: f64, max: f64) -> (f64, bool) {
    let mut flipped = false;
    loop {
        if x > max {
            x = 2.0 * max - x;
        } else if x < 0.0 {
            x = -x;
        } else {
            return (x, flipped);
        }
        flipped = !flipped;
    }
}

fn advance(v: &Vehicle, heading: f64, dt: f64, field: Field) -> (Position, f64) {
    let (sin, cos) = heading.sin_cos();
    let (x, flip_x) = reflect(v.position.x + v.speed * dt * cos, field.width);
    let (y, flip_y) = reflect(v.position.y + v.speed * dt * sin, field.height);
    let mut heading = heading;
    if flip_x {
        heading = PI - heading;
    }
    if flip_y {
        heading = -heading;
    }
    let pos = Position::new(x.clamp(0.0, field.width), y.clamp(0.0, field.height));
    (pos, wrap_pi(heading))
}

/// Moves every vehicle `speed·dt` along its heading, reflecting off the
/// field edges.
pub fn step_mobility(snapshot: &NetworkSnapshot, dt: f64, field: Field) -> Result<NetworkSnapshot> {
    positive("dt", dt)?;
    snapshot.map_vehicles(|v| {
        let (position, heading) = advance(v, v.heading.radians(), dt, field);
        Vehicle { position, heading: Angle::from_radians(heading), ..*v }
    })
}

/// Most recent beacon instant at or before `sim_time`.
pub fn last_beacon_time(sim_time: f64, beacon_interval: f64) -> f64 {
    (sim_time / beacon_interval).floor() * beacon_interval
}

/// Positions every vehicle advertised at the most recent beacon.
///
/// Constant-velocity motion is run backwards from `sim_time` to the beacon
/// instant, so a moving vehicle's advertised position lags its true one by
/// `speed × (sim_time − last beacon)`.
pub fn beacon_view(
    snapshot: &NetworkSnapshot,
    sim_time: f64,
    beacon_interval: f64,
    field: Field,
) -> Result<BTreeMap<VehicleId, Position>> {
    positive("beacon_interval", beacon_interval)?;
    let lag = sim_time - last_beacon_time(sim_time, beacon_interval);
    Ok(snapshot
        .vehicles()
        .iter()
        .map(|v| {
            let pos = if lag > 0.0 && v.speed > 0.0 {
                advance(v, v.heading.radians() + PI, lag, field).0
            } else {
                v.position
            };
            (v.id, pos)
        })
        .collect())
}

/// `snapshot` with positions replaced by the beaconed ones in `view`.
pub fn apply_view(snapshot: &NetworkSnapshot, view: &BTreeMap<VehicleId, Position>) -> Result<NetworkSnapshot> {
    snapshot.map_vehicles(|v| Vehicle { position: view.get(&v.id).copied().unwrap_or(v.position), ..*v })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DropBreakdown {
    pub void_drops: u64,
    pub ttl_drops: u64,
    pub loop_drops: u64,
    pub zone_unreachable: u64,
}

impl DropBreakdown {
    pub fn total(&self) -> u64 {
        self.void_drops + self.ttl_drops + self.loop_drops + self.zone_unreachable
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignMetrics {
    pub protocol: Protocol,
    pub node_count: usize,
    pub sent: u64,
    pub delivered: u64,
    /// `None` when nothing was sent.
    pub pdr: Option<f64>,
    /// Means over delivered packets; `None` when none were delivered.
    pub mean_hop_count: Option<f64>,
    pub mean_path_length_m: Option<f64>,
    pub mean_delay_ms: Option<f64>,
    pub drop_breakdown: DropBreakdown,
    /// Hash of the initial placement and flow schedule. Equal digests mean
    /// two campaigns routed identical scenarios.
    pub scenario_digest: u64,
}

/// One routed flow, as recorded by [`run_campaign_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub time: f64,
    pub source: VehicleId,
    pub dest: VehicleId,
    pub result: RouteResult,
    /// Sum of true hop lengths along the path, in meters.
    pub path_length_m: f64,
}

pub fn run_campaign(config: &SimConfig) -> Result<CampaignMetrics> {
    run_campaign_traced(config).map(|(m, _)| m)
}

/// Runs a campaign and also returns every flow's route.
///
/// Time advances in `time_step` increments. Flow `i` is scheduled at
/// `i × duration / flows` and is routed at the first step at or after that
/// time, over the stale beacon view; the last hop to the destination is
/// judged on true positions.
pub fn run_campaign_traced(config: &SimConfig) -> Result<(CampaignMetrics, Vec<FlowRecord>)> {
    config.validate()?;
    let field = config.field();
    let initial = generate_nodes(config)?;
    let mut truth = initial.clone();
    let mut flow_rng = stream_rng(config.seed, FLOW_STREAM);
    let n = truth.len() as u32;

    let mut digest = DefaultHasher::new();
    for v in initial.vehicles() {
        v.id.hash(&mut digest);
        v.position.x.to_bits().hash(&mut digest);
        v.position.y.to_bits().hash(&mut digest);
    }

    let mut records = Vec::new();
    let flows = if n >= 2 { config.flows } else { 0 };
    let mut next_flow = 0u32;
    let mut step = 0u64;
    while next_flow < flows {
        let now = step as f64 * config.time_step;
        while next_flow < flows && f64::from(next_flow) * config.duration / f64::from(flows) <= now {
            let source = flow_rng.random_range(0..n);
            let mut dest = flow_rng.random_range(0..n - 1);
            if dest >= source {
                dest += 1;
            }
            let (source, dest) = (VehicleId(source), VehicleId(dest));
            (step, source, dest).hash(&mut digest);

            let view = apply_view(&truth, &beacon_view(&truth, now, config.beacon_interval, field)?)?;
            let t0 = last_beacon_time(now, config.beacon_interval);
            let d = view.get(dest)?;
            let packet = Packet::new(source, dest, d.position, d.speed, t0.min(now), config.ttl);
            let result = route_packet(config.protocol, &packet, &view, &truth, now)?;
            let path_length_m = path_length(&truth, &result.path)?;
            records.push(FlowRecord { time: now, source, dest, result, path_length_m });
            next_flow += 1;
        }
        if next_flow < flows {
            truth = step_mobility(&truth, config.time_step, field)?;
            step += 1;
        }
    }

    let metrics = summarize(config, initial.len(), &records, digest.finish());
    Ok((metrics, records))
}

fn path_length(truth: &NetworkSnapshot, path: &[VehicleId]) -> Result<f64> {
    path.windows(2).try_fold(0.0, |acc, w| Ok(acc + distance(truth.get(w[0])?.position, truth.get(w[1])?.position)))
}

fn summarize(config: &SimConfig, node_count: usize, records: &[FlowRecord], digest: u64) -> CampaignMetrics {
    let mut drops = DropBreakdown::default();
    let mut delivered = 0u64;
    let mut hops = 0usize;
    let mut meters = 0.0;
    for r in records {
        match r.result.outcome {
            Outcome::Delivered => {
                delivered += 1;
                hops += r.result.hop_count;
                meters += r.path_length_m;
            }
            Outcome::VoidDrop => drops.void_drops += 1,
            Outcome::TtlDrop => drops.ttl_drops += 1,
            Outcome::LoopDrop => drops.loop_drops += 1,
            Outcome::ZoneUnreachable => drops.zone_unreachable += 1,
        }
    }
    let sent = records.len() as u64;
    let mean_hops = (delivered > 0).then(|| hops as f64 / delivered as f64);
    CampaignMetrics {
        protocol: config.protocol,
        node_count,
        sent,
        delivered,
        pdr: (sent > 0).then(|| delivered as f64 / sent as f64),
        mean_hop_count: mean_hops,
        mean_path_length_m: (delivered > 0).then(|| meters / delivered as f64),
        mean_delay_ms: mean_hops.map(|h| h * config.per_hop_latency_ms),
        drop_breakdown: drops,
        scenario_digest: digest,
    }
}

/// Runs the same seeded scenario once per protocol, in `Protocol::ALL`
/// order. The protocol field of `config` is ignored.
pub fn compare_protocols(config: &SimConfig) -> Result<Vec<CampaignMetrics>> {
    Protocol::ALL
        .par_iter()
        .map(|&protocol| run_campaign(&SimConfig { protocol, ..config.clone() }))
        .collect()
}

/// Runs independent campaigns concurrently; results keep the input order.
pub fn run_sweep(configs: &[SimConfig]) -> Result<Vec<CampaignMetrics>> {
    configs.par_iter().map(run_campaign).collect()
}

pub const METRICS_CSV_HEADER: &str =
    "protocol,density,tx_range,seed,sent,delivered,pdr,mean_hops,mean_delay_ms,void_drops,ttl_drops,loop_drops,zone_unreachable";

fn fixed6(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

/// One metrics CSV row (no trailing newline). Undefined means are left
/// empty.
pub fn metrics_csv_row(config: &SimConfig, m: &CampaignMetrics) -> String {
    let d = &m.drop_breakdown;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        m.protocol,
        config.density,
        config.tx_range,
        config.seed,
        m.sent,
        m.delivered,
        fixed6(m.pdr),
        fixed6(m.mean_hop_count),
        fixed6(m.mean_delay_ms),
        d.void_drops,
        d.ttl_drops,
        d.loop_drops,
        d.zone_unreachable,
    )
}

pub fn write_metrics_csv<'a, W: Write>(
    out: &mut W,
    rows: impl IntoIterator<Item = (&'a SimConfig, &'a CampaignMetrics)>,
) -> io::Result<()> {
    writeln!(out, "{METRICS_CSV_HEADER}")?;
    for (config, metrics) in rows {
        writeln!(out, "{}", metrics_csv_row(config, metrics))?;
    }
    Ok(())
}
