mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::*;
use geo_route_sim::routing::{
    dir_candidates, dir_next_hop, dlar_candidates, dlar_next_hop, lar_route_discovery, neighbors, route, route_packet,
};
use geo_route_sim::{Angle, NetworkSnapshot, Outcome, Packet, Position, Protocol, Vehicle, VehicleId};
use rand::Rng;

fn ids(vs: &[&Vehicle]) -> Vec<VehicleId> {
    vs.iter().map(|v| v.id).collect()
}

#[test]
fn neighbors_match_pairwise_filter() {
    for seed in 0..40 {
        let mut r = rng(seed);
        let vehicles = (0..50)
            .map(|i| Vehicle::parked(i, Position::new(r.random_range(0.0..500.0), r.random_range(0.0..500.0))))
            .collect();
        let snap = NetworkSnapshot::new(vehicles, 100.0).unwrap();
        for v in snap.vehicles() {
            let expected: Vec<VehicleId> = snap
                .vehicles()
                .iter()
                .filter(|u| u.id != v.id && linked(u.position, v.position, 100.0))
                .map(|u| u.id)
                .collect();
            assert_eq!(ids(&neighbors(v.id, &snap).unwrap()), expected);
        }
    }
}

#[test]
fn boundary_distance_is_a_link() {
    let snap = NetworkSnapshot::new(vec![Vehicle::parked(0, Position::new(0.0, 0.0)), Vehicle::parked(1, Position::new(100.0, 0.0))], 100.0).unwrap();
    assert_eq!(neighbors(VehicleId(0), &snap).unwrap().len(), 1);
    assert_eq!(neighbors(VehicleId(1), &snap).unwrap().len(), 1);
}

fn random_decision(seed: u64) -> (NetworkSnapshot, VehicleId, Packet, f64) {
    let snap = random_snapshot(seed, 200);
    let mut r = rng(seed ^ 0xdead_beef);
    let n = snap.len() as u32;
    let cur = VehicleId(r.random_range(0..n));
    let dest_pos = if r.random_bool(0.5) {
        snap.get(VehicleId(r.random_range(0..n))).unwrap().position
    } else {
        Position::new(r.random_range(-100.0..1100.0), r.random_range(-100.0..1100.0))
    };
    let mut packet = Packet::new(cur, VehicleId(u32::MAX), dest_pos, r.random_range(0.0..30.0), 0.0, 64);
    for _ in 0..r.random_range(0..(n as usize / 4 + 1)) {
        let id = VehicleId(r.random_range(0..n));
        if !packet.visited.contains(&id) {
            packet.visited.push(id);
        }
    }
    let now = r.random_range(0.0..10.0);
    (snap, cur, packet, now)
}

#[test]
fn greedy_rules_match_exhaustive_argmin() {
    for seed in 0..600 {
        let (snap, cur_id, packet, now) = random_decision(seed);
        let cur = snap.get(cur_id).unwrap();

        let dir_set = brute_dir_candidates(&snap, cur, &packet.visited);
        assert_eq!(ids(&dir_candidates(cur, &snap, &packet.visited)), dir_set, "seed {seed}");
        let dir = dir_next_hop(cur, packet.dest_last_pos, &snap, &packet.visited).map(|v| v.id);
        assert_eq!(dir, brute_argmin(&snap, cur, packet.dest_last_pos, &dir_set), "seed {seed}");

        let q = ZoneQuery { dest_pos: packet.dest_last_pos, dest_speed: packet.dest_speed, t0: packet.t0, now };
        let dlar_set = brute_dlar_candidates(&snap, cur, &packet.visited, &q);
        assert_eq!(ids(&dlar_candidates(cur, &packet, &snap, now).unwrap()), dlar_set, "seed {seed}");
        let dlar = dlar_next_hop(cur, &packet, &snap, now).unwrap().map(|v| v.id);
        assert_eq!(dlar, brute_argmin(&snap, cur, packet.dest_last_pos, &dlar_set), "seed {seed}");

        // subset dominance
        assert!(dlar_set.iter().all(|id| dir_set.contains(id)), "seed {seed}");
    }
}

#[test]
fn lar_matches_zone_bfs() {
    for seed in 0..300 {
        let snap = random_snapshot(seed + 10_000, 100);
        let mut r = rng(seed);
        let n = snap.len() as u32;
        let src = VehicleId(r.random_range(0..n));
        let mut dst = VehicleId(r.random_range(0..n - 1));
        if dst.0 >= src.0 {
            dst.0 += 1;
        }
        let d = snap.get(dst).unwrap();
        let packet = Packet::new(src, dst, d.position, r.random_range(0.0..20.0), 0.0, 64);
        let now = r.random_range(0.0..8.0);
        let rect = zone_rect(snap.get(src).unwrap().position, d.position, packet.dest_speed * now);

        let res = lar_route_discovery(src, &packet, &snap, now).unwrap();
        match zone_bfs_hops(&snap, src, dst, rect) {
            Some(h) => {
                assert_eq!(res.outcome, Outcome::Delivered, "seed {seed}");
                assert_eq!(res.hop_count, h, "seed {seed}");
                let rng = snap.transmission_range();
                for w in res.path.windows(2) {
                    assert!(linked(snap.get(w[0]).unwrap().position, snap.get(w[1]).unwrap().position, rng));
                }
                for relay in &res.path[1..res.path.len() - 1] {
                    assert!(in_rect(snap.get(*relay).unwrap().position, rect));
                }
            }
            None => assert_eq!(res.outcome, Outcome::ZoneUnreachable, "seed {seed}"),
        }
    }
}

#[test]
fn routes_never_revisit_a_vehicle() {
    for seed in 0..10_000u64 {
        let snap = random_snapshot(seed, 40);
        let n = snap.len() as u32;
        let (src, dst) = (VehicleId(0), VehicleId(n - 1));
        let protocol = Protocol::ALL[(seed % 3) as usize];
        let res = route(protocol, src, dst, &snap, 0.0, 64).unwrap();
        let mut seen = res.path.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), res.path.len(), "seed {seed} {protocol}: {:?}", res.path);
        assert_eq!(res.path[0], src);
        if res.is_delivered() {
            assert_eq!(*res.path.last().unwrap(), dst);
            assert_eq!(res.hop_count, res.path.len() - 1);
        }
    }
}

#[test]
fn identical_inputs_give_identical_results() {
    for seed in 0..50 {
        let snap = random_snapshot(seed, 120);
        let n = snap.len() as u32;
        for protocol in Protocol::ALL {
            let a = route(protocol, VehicleId(0), VehicleId(n - 1), &snap, 1.0, 64).unwrap();
            let b = route(protocol, VehicleId(0), VehicleId(n - 1), &snap.clone(), 1.0, 64).unwrap();
            assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }
}

fn transform(snap: &NetworkSnapshot, quarter_turns: i32, theta: f64, dx: f64, dy: f64) -> NetworkSnapshot {
    let angle = quarter_turns as f64 * FRAC_PI_2 + theta;
    snap.map_vehicles(|v| {
        let p = match quarter_turns.rem_euclid(4) {
            // exact for quarter turns
            _ if theta != 0.0 => v.position.rotated_about(Position::new(0.0, 0.0), angle),
            0 => v.position,
            1 => Position::new(-v.position.y, v.position.x),
            2 => Position::new(-v.position.x, -v.position.y),
            _ => Position::new(v.position.y, -v.position.x),
        };
        Vehicle { position: p.translated(dx, dy), heading: Angle::from_radians(v.heading.radians() + angle).wrapped(), ..*v }
    })
    .unwrap()
}

#[test]
fn dir_paths_survive_rigid_motion() {
    for seed in (1..200).step_by(2) {
        let snap = random_snapshot(seed, 80);
        let n = snap.len() as u32;
        let mut r = rng(seed);
        let moved = transform(&snap, 0, r.random_range(-PI..PI), r.random_range(-500.0..500.0), r.random_range(-500.0..500.0));
        let a = route(Protocol::Dir, VehicleId(0), VehicleId(n - 1), &snap, 0.0, 64).unwrap();
        let b = route(Protocol::Dir, VehicleId(0), VehicleId(n - 1), &moved, 0.0, 64).unwrap();
        assert_eq!(a.path, b.path, "seed {seed}");
    }
}

#[test]
fn zone_protocols_survive_axis_preserving_motion() {
    // Request zones are axis-aligned, so only quarter-turn rotations keep
    // them congruent.
    for seed in 0..200u64 {
        let snap = random_snapshot(seed, 80);
        let n = snap.len() as u32;
        let turns = (seed % 4) as i32;
        let moved = transform(&snap, turns, 0.0, 256.0, -512.0);
        for protocol in Protocol::ALL {
            let a = route(protocol, VehicleId(0), VehicleId(n - 1), &snap, 0.0, 64).unwrap();
            let b = route(protocol, VehicleId(0), VehicleId(n - 1), &moved, 0.0, 64).unwrap();
            assert_eq!(a.path, b.path, "seed {seed} {protocol}");
        }
    }
}

#[test]
fn stale_view_routes_check_delivery_on_truth() {
    // In the view the destination looks two hops away; in truth it is a
    // direct neighbor of the source.
    let truth = NetworkSnapshot::new(
        vec![Vehicle::parked(0, Position::new(0.0, 0.0)), Vehicle::parked(1, Position::new(80.0, 0.0)), Vehicle::parked(2, Position::new(90.0, 0.0))],
        100.0,
    )
    .unwrap();
    let view = truth
        .map_vehicles(|v| if v.id == VehicleId(2) { Vehicle { position: Position::new(170.0, 0.0), ..*v } } else { *v })
        .unwrap();
    let packet = Packet::new(VehicleId(0), VehicleId(2), Position::new(170.0, 0.0), 0.0, 0.0, 8);
    for protocol in Protocol::ALL {
        let res = route_packet(protocol, &packet, &view, &truth, 0.0).unwrap();
        assert_eq!(res.path, vec![VehicleId(0), VehicleId(2)], "{protocol}");
    }
}
