//! D-LAR walking a chain of eastbound vehicles while ignoring nearby
//! vehicles that lie outside the request zone or head the other way.

use geo_route_sim::routing::{dlar_candidates, route_packet};
use geo_route_sim::{Angle, NetworkSnapshot, Packet, Position, Protocol, Vehicle, VehicleId};

fn main() -> geo_route_sim::Result<()> {
    let east = |id, x, y| Vehicle::new(id, Position::new(x, y), 10.0, Angle::ZERO);
    let west = |id, x, y| Vehicle::new(id, Position::new(x, y), 10.0, Angle::from_degrees(180.0));
    let snap = NetworkSnapshot::new(
        vec![
            east(0, 0.0, 0.0),
            east(1, 85.0, 5.0),
            east(2, 170.0, -4.0),
            east(3, 255.0, 3.0),
            east(4, 340.0, 0.0),
            east(5, 50.0, 60.0),
            west(6, 95.0, -2.0),
        ],
        100.0,
    )?;
    let packet = Packet::new(VehicleId(0), VehicleId(4), Position::new(340.0, 0.0), 10.0, 0.0, 64);
    let now = 2.0;

    let s = snap.get(VehicleId(0))?;
    let cands: Vec<String> = dlar_candidates(s, &packet, &snap, now)?.iter().map(|v| v.id.to_string()).collect();
    println!("D-LAR candidates at the source: {}", cands.join(", "));

    for protocol in Protocol::ALL {
        let res = route_packet(protocol, &packet, &snap, &snap, now)?;
        let path: Vec<String> = res.path.iter().map(|id| id.to_string()).collect();
        println!("{protocol:>4}: {:<10} {}", res.outcome.to_string(), path.join(" -> "));
    }
    Ok(())
}
