//! Brute-force reference implementations used by the integration tests.
//!
//! Nothing here calls into the routing or zones modules; only the raw
//! angle primitive from `geometry` is shared.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::PI;

use geo_route_sim::geometry::{deviation_angle, distance};
use geo_route_sim::{Angle, NetworkSnapshot, Position, Vehicle, VehicleId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random snapshot of up to `max_nodes` vehicles. Half of the seeds snap
/// positions to a coarse grid so that collinear candidates, exact ties and
/// co-located vehicles actually occur.
pub fn random_snapshot(seed: u64, max_nodes: usize) -> NetworkSnapshot {
    let mut r = rng(seed);
    let n = r.random_range(2..=max_nodes);
    let grid = seed % 2 == 0;
    let range = if grid { 10.0 * r.random_range(5..=30) as f64 } else { r.random_range(50.0..300.0) };
    let vehicles = (0..n)
        .map(|i| {
            let pos = if grid {
                Position::new(10.0 * r.random_range(0..=60) as f64, 10.0 * r.random_range(0..=60) as f64)
            } else {
                Position::new(r.random_range(0.0..1000.0), r.random_range(0.0..1000.0))
            };
            Vehicle::new(i as u32, pos, r.random_range(0.0..30.0), Angle::from_radians(r.random_range(-PI..PI)))
        })
        .collect();
    NetworkSnapshot::new(vehicles, range).unwrap()
}

pub fn linked(a: Position, b: Position, range: f64) -> bool {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    dx * dx + dy * dy <= range * range
}

/// Rectangle spanned by `anchor` and the disk (center, radius), as
/// (min_x, min_y, max_x, max_y).
pub fn zone_rect(anchor: Position, center: Position, radius: f64) -> (f64, f64, f64, f64) {
    let xs = [anchor.x, center.x - radius, center.x + radius];
    let ys = [anchor.y, center.y - radius, center.y + radius];
    let lo = |v: [f64; 3]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = |v: [f64; 3]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo(xs), lo(ys), hi(xs), hi(ys))
}

pub fn in_rect(p: Position, r: (f64, f64, f64, f64)) -> bool {
    p.x >= r.0 && p.x <= r.2 && p.y >= r.1 && p.y <= r.3
}

fn heading_gap(a: Angle, b: Angle) -> f64 {
    let d = a.radians() - b.radians();
    d.sin().atan2(d.cos()).abs()
}

/// Exhaustive candidate filter for compass routing.
pub fn brute_dir_candidates(snap: &NetworkSnapshot, cur: &Vehicle, visited: &[VehicleId]) -> Vec<VehicleId> {
    snap.vehicles()
        .iter()
        .filter(|u| {
            u.id != cur.id
                && !visited.contains(&u.id)
                && u.position != cur.position
                && linked(u.position, cur.position, snap.transmission_range())
        })
        .map(|u| u.id)
        .collect()
}

pub struct ZoneQuery {
    pub dest_pos: Position,
    pub dest_speed: f64,
    pub t0: f64,
    pub now: f64,
}

/// Exhaustive candidate filter for the directional zone rule.
pub fn brute_dlar_candidates(snap: &NetworkSnapshot, cur: &Vehicle, visited: &[VehicleId], q: &ZoneQuery) -> Vec<VehicleId> {
    let rect = zone_rect(cur.position, q.dest_pos, q.dest_speed * (q.now - q.t0));
    let in_zone: Vec<&Vehicle> = brute_dir_candidates(snap, cur, visited)
        .into_iter()
        .map(|id| snap.vehicles().iter().find(|v| v.id == id).unwrap())
        .filter(|u| in_rect(u.position, rect))
        .collect();
    let aligned: Vec<VehicleId> =
        in_zone.iter().filter(|u| heading_gap(u.heading, cur.heading) <= PI / 2.0).map(|u| u.id).collect();
    if aligned.is_empty() {
        in_zone.iter().map(|u| u.id).collect()
    } else {
        aligned
    }
}

/// Linear scan for the lexicographic minimum of (deviation, distance to
/// destination, id).
pub fn brute_argmin(snap: &NetworkSnapshot, cur: &Vehicle, dest: Position, candidates: &[VehicleId]) -> Option<VehicleId> {
    if dest == cur.position {
        return None;
    }
    let mut best: Option<(f64, f64, VehicleId)> = None;
    for &id in candidates {
        let u = snap.vehicles().iter().find(|v| v.id == id).unwrap();
        let key = (deviation_angle(cur.position, u.position, dest).unwrap().radians(), distance(u.position, dest), id);
        let better = match best {
            None => true,
            Some(b) => key.0 < b.0 || (key.0 == b.0 && (key.1 < b.1 || (key.1 == b.1 && key.2 < b.2))),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|b| b.2)
}

/// Hop distance from `source` to `dest` when only vehicles inside `rect`
/// (plus the source) relay. `None` if unreachable.
pub fn zone_bfs_hops(snap: &NetworkSnapshot, source: VehicleId, dest: VehicleId, rect: (f64, f64, f64, f64)) -> Option<usize> {
    let vs = snap.vehicles();
    let idx = |id: VehicleId| vs.iter().position(|v| v.id == id).unwrap();
    let (s, d) = (idx(source), idx(dest));
    let r = snap.transmission_range();
    let mut dist = vec![usize::MAX; vs.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for w in 0..vs.len() {
            if dist[w] != usize::MAX || !linked(vs[u].position, vs[w].position, r) {
                continue;
            }
            dist[w] = dist[u] + 1;
            if w == d {
                return Some(dist[w]);
            }
            if in_rect(vs[w].position, rect) {
                queue.push_back(w);
            }
        }
    }
    None
}
