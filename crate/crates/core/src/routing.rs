//! Next-hop selection and route discovery.
//!
//! Three strategies share one neighbor model (unit disk of radius
//! `transmission_range`, boundary inclusive):
//!
//! - **DIR** forwards to the unvisited neighbor whose direction deviates
//!   least from the line toward the destination.
//! - **LAR** floods a route request, but only nodes inside the request zone
//!   anchored at the source rebroadcast it.
//! - **D-LAR** is DIR restricted to neighbors inside the request zone
//!   anchored at the current forwarder, preferring neighbors that travel in
//!   roughly the same direction as the forwarder.
//!
//! Ties between equal deviations go to the candidate closer to the
//! destination, then to the smaller id.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{deviation_angle, distance, Angle, Position};
use crate::zones::{expected_zone, request_zone, RequestZone};

pub const DEFAULT_TTL: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VehicleId(pub u32);

impl fmt::Display for VehicleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vehicle {
    pub id: VehicleId,
    pub position: Position,
    /// Meters per second, never negative.
    pub speed: f64,
    /// Direction of motion in `(-π, π]`.
    pub heading: Angle,
}

impl Vehicle {
    pub fn new(id: u32, position: Position, speed: f64, heading: Angle) -> Self {
        Self { id: VehicleId(id), position, speed, heading: heading.wrapped() }
    }

    /// Stationary vehicle facing +x.
    pub fn parked(id: u32, position: Position) -> Self {
        Self::new(id, position, 0.0, Angle::ZERO)
    }

    pub fn velocity(&self) -> (f64, f64) {
        let (sin, cos) = self.heading.radians().sin_cos();
        (self.speed * cos, self.speed * sin)
    }
}

/// Immutable view of every vehicle at one instant.
///
/// Vehicles are kept sorted by id so that every query iterates in a fixed
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSnapshot {
    vehicles: Vec<Vehicle>,
    transmission_range: f64,
}

impl NetworkSnapshot {
    pub fn new(mut vehicles: Vec<Vehicle>, transmission_range: f64) -> Result<Self> {
        if !(transmission_range > 0.0) || !transmission_range.is_finite() {
            return Err(Error::invalid("transmission_range", "must be a finite value > 0"));
        }
        vehicles.sort_by_key(|v| v.id);
        for pair in vehicles.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateVehicle(pair[0].id));
            }
        }
        for v in &vehicles {
            if !v.position.is_finite() {
                return Err(Error::invalid("position", format!("vehicle {} has a non-finite coordinate", v.id)));
            }
            if !(v.speed >= 0.0) || !v.speed.is_finite() {
                return Err(Error::InvalidSpeed(v.speed));
            }
        }
        Ok(Self { vehicles, transmission_range })
    }

    pub fn vehicles(&self) -> &[Vehicle] {
        &self.vehicles
    }

    pub fn len(&self) -> usize {
        self.vehicles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vehicles.is_empty()
    }

    pub fn transmission_range(&self) -> f64 {
        self.transmission_range
    }

    pub fn get(&self, id: VehicleId) -> Result<&Vehicle> {
        self.index_of(id).map(|i| &self.vehicles[i])
    }

    fn index_of(&self, id: VehicleId) -> Result<usize> {
        self.vehicles.binary_search_by_key(&id, |v| v.id).map_err(|_| Error::UnknownVehicle(id))
    }

    pub fn in_range(&self, a: Position, b: Position) -> bool {
        distance(a, b) <= self.transmission_range
    }

    /// Same vehicles and range with positions (and headings) replaced by `f`.
    pub fn map_vehicles(&self, mut f: impl FnMut(&Vehicle) -> Vehicle) -> Result<Self> {
        Self::new(self.vehicles.iter().map(&mut f).collect(), self.transmission_range)
    }
}

/// All vehicles other than `v_id` within transmission range of it, by id.
pub fn neighbors(v_id: VehicleId, snapshot: &NetworkSnapshot) -> Result<Vec<&Vehicle>> {
    let me = snapshot.get(v_id)?;
    Ok(neighbors_of(me, snapshot).collect())
}

fn neighbors_of<'a>(me: &'a Vehicle, snapshot: &'a NetworkSnapshot) -> impl Iterator<Item = &'a Vehicle> + 'a {
    snapshot
        .vehicles
        .iter()
        .filter(move |u| u.id != me.id && snapshot.in_range(u.position, me.position))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Dir,
    Lar,
    Dlar,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Dir, Protocol::Lar, Protocol::Dlar];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Dir => "dir",
            Protocol::Lar => "lar",
            Protocol::Dlar => "dlar",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dir" => Ok(Protocol::Dir),
            "lar" => Ok(Protocol::Lar),
            "dlar" | "d-lar" => Ok(Protocol::Dlar),
            other => Err(Error::invalid("protocol", format!("unknown protocol `{other}` (expected dir, lar or dlar)"))),
        }
    }
}

/// Route request / data packet.
///
/// The request zone is not carried verbatim; it is rebuilt from the
/// destination's last known position and speed whenever it is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub source: VehicleId,
    pub dest: VehicleId,
    pub dest_last_pos: Position,
    pub dest_speed: f64,
    /// Timestamp of `dest_last_pos`.
    pub t0: f64,
    /// Hop trace, starting with `source`.
    pub visited: Vec<VehicleId>,
    /// Remaining forwarding hops.
    pub ttl: u32,
}

impl Packet {
    pub fn new(source: VehicleId, dest: VehicleId, dest_last_pos: Position, dest_speed: f64, t0: f64, ttl: u32) -> Self {
        Self { source, dest, dest_last_pos, dest_speed, t0, visited: vec![source], ttl }
    }

    /// Packet whose destination knowledge is read from `snapshot` as of `t0`.
    pub fn from_snapshot(snapshot: &NetworkSnapshot, source: VehicleId, dest: VehicleId, t0: f64, ttl: u32) -> Result<Self> {
        snapshot.get(source)?;
        let d = snapshot.get(dest)?;
        Ok(Self::new(source, dest, d.position, d.speed, t0, ttl))
    }

    pub fn has_visited(&self, id: VehicleId) -> bool {
        self.visited.contains(&id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Delivered,
    /// Greedy dead end: no eligible neighbor.
    VoidDrop,
    TtlDrop,
    LoopDrop,
    /// Zone-restricted flooding never reached the destination.
    ZoneUnreachable,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Delivered => "delivered",
            Outcome::VoidDrop => "void_drop",
            Outcome::TtlDrop => "ttl_drop",
            Outcome::LoopDrop => "loop_drop",
            Outcome::ZoneUnreachable => "zone_unreachable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult {
    pub outcome: Outcome,
    pub path: Vec<VehicleId>,
    pub hop_count: usize,
}

impl RouteResult {
    fn finished(outcome: Outcome, path: Vec<VehicleId>) -> Self {
        let hop_count = path.len().saturating_sub(1);
        Self { outcome, path, hop_count }
    }

    pub fn is_delivered(&self) -> bool {
        self.outcome == Outcome::Delivered
    }
}

/// Ordering key for candidates: deviation, then distance to destination,
/// then id.
fn selection_key(from: Position, dest: Position, v: &Vehicle) -> (f64, f64, VehicleId) {
    // Callers have already excluded candidates co-located with `from`.
    let dev = deviation_angle(from, v.position, dest).map(Angle::radians).unwrap_or(f64::INFINITY);
    (dev, distance(v.position, dest), v.id)
}

fn select_min<'a>(from: Position, dest: Position, candidates: impl IntoIterator<Item = &'a Vehicle>) -> Option<&'a Vehicle> {
    candidates
        .into_iter()
        .map(|v| (selection_key(from, dest, v), v))
        .min_by(|(a, _), (b, _)| {
            a.0.total_cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
        })
        .map(|(_, v)| v)
}

/// DIR candidate set: unvisited neighbors of `current`.
///
/// Neighbors sharing `current`'s exact position are skipped since they
/// define no direction.
pub fn dir_candidates<'a>(current: &'a Vehicle, snapshot: &'a NetworkSnapshot, visited: &[VehicleId]) -> Vec<&'a Vehicle> {
    neighbors_of(current, snapshot)
        .filter(|u| !visited.contains(&u.id) && u.position != current.position)
        .collect()
}

/// Compass routing: the unvisited neighbor minimizing the deviation from the
/// ray `current -> dest_pos`.
pub fn dir_next_hop<'a>(
    current: &'a Vehicle,
    dest_pos: Position,
    snapshot: &'a NetworkSnapshot,
    visited: &[VehicleId],
) -> Option<&'a Vehicle> {
    if dest_pos == current.position {
        return None;
    }
    select_min(current.position, dest_pos, dir_candidates(current, snapshot, visited))
}

/// Request zone anchored at `current` for `packet` at time `now`.
pub fn dlar_zone(current: &Vehicle, packet: &Packet, now: f64) -> Result<RequestZone> {
    let ez = expected_zone(packet.dest_last_pos, packet.dest_speed, packet.t0, now)?;
    Ok(request_zone(current.position, &ez))
}

/// Vehicles moving within a quarter turn of each other count as "same
/// direction".
pub fn same_direction(a: Angle, b: Angle) -> bool {
    a.separation(b).radians() <= FRAC_PI_2
}

/// D-LAR candidate set: DIR candidates inside the zone anchored at
/// `current`, narrowed to same-direction vehicles unless that would leave
/// none.
pub fn dlar_candidates<'a>(
    current: &'a Vehicle,
    packet: &Packet,
    snapshot: &'a NetworkSnapshot,
    now: f64,
) -> Result<Vec<&'a Vehicle>> {
    let zone = dlar_zone(current, packet, now)?;
    let in_zone: Vec<&Vehicle> = dir_candidates(current, snapshot, &packet.visited)
        .into_iter()
        .filter(|u| zone.contains(u.position))
        .collect();
    let aligned: Vec<&Vehicle> = in_zone.iter().copied().filter(|u| same_direction(u.heading, current.heading)).collect();
    Ok(if aligned.is_empty() { in_zone } else { aligned })
}

pub fn dlar_next_hop<'a>(
    current: &'a Vehicle,
    packet: &Packet,
    snapshot: &'a NetworkSnapshot,
    now: f64,
) -> Result<Option<&'a Vehicle>> {
    if packet.dest_last_pos == current.position {
        return Ok(None);
    }
    let candidates = dlar_candidates(current, packet, snapshot, now)?;
    Ok(select_min(current.position, packet.dest_last_pos, candidates))
}

/// Zone-restricted route request flooding from `source_id`.
///
/// The zone is anchored at the source. Nodes inside it rebroadcast once;
/// nodes outside drop the request. The reported path is the first-arrival
/// (minimum hop) path with neighbors expanded in id order.
pub fn lar_route_discovery(source_id: VehicleId, packet: &Packet, snapshot: &NetworkSnapshot, now: f64) -> Result<RouteResult> {
    let mut packet = packet.clone();
    packet.source = source_id;
    lar_discover(&packet, snapshot, snapshot, now)
}

/// Routes a fresh packet from `source` to `dest` on a single snapshot.
///
/// The destination's position and speed are read from the snapshot with
/// `t0 = now`.
pub fn route(
    protocol: Protocol,
    source: VehicleId,
    dest: VehicleId,
    snapshot: &NetworkSnapshot,
    now: f64,
    ttl: u32,
) -> Result<RouteResult> {
    let packet = Packet::from_snapshot(snapshot, source, dest, now, ttl)?;
    route_packet(protocol, &packet, snapshot, snapshot, now)
}

/// Routes `packet` where forwarding decisions use `view` (beaconed
/// positions) and the final hop to the destination is checked against
/// `truth`.
///
/// Both snapshots must hold the same vehicle ids.
pub fn route_packet(
    protocol: Protocol,
    packet: &Packet,
    view: &NetworkSnapshot,
    truth: &NetworkSnapshot,
    now: f64,
) -> Result<RouteResult> {
    if packet.source == packet.dest {
        return Err(Error::invalid("dest", "source and destination must differ"));
    }
    view.get(packet.source)?;
    view.get(packet.dest)?;
    truth.get(packet.source)?;
    truth.get(packet.dest)?;
    if !(now >= packet.t0) {
        return Err(Error::InvalidTime { t0: packet.t0, t1: now });
    }
    match protocol {
        Protocol::Lar => lar_discover(packet, view, truth, now),
        Protocol::Dir | Protocol::Dlar => greedy(protocol, packet, view, truth, now),
    }
}

fn greedy(protocol: Protocol, packet: &Packet, view: &NetworkSnapshot, truth: &NetworkSnapshot, now: f64) -> Result<RouteResult> {
    let mut packet = packet.clone();
    let dest_truth = truth.get(packet.dest)?.position;
    let mut current = view.get(packet.source)?;
    let path_done = |p: Packet, outcome| RouteResult::finished(outcome, p.visited);
    loop {
        if packet.ttl == 0 {
            return Ok(path_done(packet, Outcome::TtlDrop));
        }
        let here = truth.get(current.id)?.position;
        if truth.in_range(here, dest_truth) {
            packet.ttl -= 1;
            packet.visited.push(packet.dest);
            return Ok(path_done(packet, Outcome::Delivered));
        }
        // The destination is never a relay: if it were truly in range the
        // packet would already have been delivered above.
        let mut excluded = packet.clone();
        excluded.visited.push(packet.dest);
        let next = match protocol {
            Protocol::Dlar => dlar_next_hop(current, &excluded, view, now)?,
            _ => dir_next_hop(current, packet.dest_last_pos, view, &excluded.visited),
        };
        let Some(next) = next else {
            return Ok(path_done(packet, Outcome::VoidDrop));
        };
        if packet.has_visited(next.id) {
            return Ok(path_done(packet, Outcome::LoopDrop));
        }
        packet.ttl -= 1;
        packet.visited.push(next.id);
        current = next;
    }
}

fn lar_discover(packet: &Packet, view: &NetworkSnapshot, truth: &NetworkSnapshot, now: f64) -> Result<RouteResult> {
    let src_idx = view.index_of(packet.source)?;
    let dest_idx = view.index_of(packet.dest)?;
    let dest_truth = truth.get(packet.dest)?.position;
    let ez = expected_zone(packet.dest_last_pos, packet.dest_speed, packet.t0, now)?;
    let zone = request_zone(view.vehicles[src_idx].position, &ez);

    let n = view.len();
    let mut hops: Vec<Option<usize>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    hops[src_idx] = Some(0);
    queue.push_back(src_idx);

    while let Some(u) = queue.pop_front() {
        let depth = hops[u].unwrap_or_default();
        let u_vehicle = &view.vehicles[u];
        if truth.in_range(truth.get(u_vehicle.id)?.position, dest_truth) {
            if depth + 1 > packet.ttl as usize {
                return Ok(RouteResult::finished(Outcome::TtlDrop, vec![packet.source]));
            }
            let mut path = vec![packet.dest];
            let mut at = Some(u);
            while let Some(i) = at {
                path.push(view.vehicles[i].id);
                at = parent[i];
            }
            path.reverse();
            return Ok(RouteResult::finished(Outcome::Delivered, path));
        }
        for (w, cand) in view.vehicles.iter().enumerate() {
            if w == u || w == dest_idx || hops[w].is_some() || !view.in_range(cand.position, u_vehicle.position) {
                continue;
            }
            hops[w] = Some(depth + 1);
            parent[w] = Some(u);
            if zone.contains(cand.position) {
                queue.push_back(w);
            }
        }
    }
    Ok(RouteResult::finished(Outcome::ZoneUnreachable, vec![packet.source]))
}
