//! Compass (DIR) next-hop choice around a single sender.

use geo_route_sim::geometry::{bearing, deviation_angle};
use geo_route_sim::routing::{dir_candidates, dir_next_hop, route};
use geo_route_sim::{NetworkSnapshot, Position, Protocol, Vehicle, VehicleId};

fn main() -> geo_route_sim::Result<()> {
    let dest = Position::new(600.0, 0.0);
    let mut vehicles = vec![Vehicle::parked(0, Position::new(0.0, 0.0)), Vehicle::parked(99, dest)];
    for (i, deg) in [40.0f64, -110.0, 5.0, 70.0, -20.0].into_iter().enumerate() {
        let (s, c) = deg.to_radians().sin_cos();
        vehicles.push(Vehicle::parked(i as u32 + 1, Position::new(90.0 * c, 90.0 * s)));
    }
    // a second ring so the packet can keep going
    for i in 0..5u32 {
        vehicles.push(Vehicle::parked(10 + i, Position::new(180.0 + 90.0 * i as f64, 8.0 * (i as f64 - 2.0))));
    }
    let snap = NetworkSnapshot::new(vehicles, 100.0)?;
    let sender = snap.get(VehicleId(0))?;

    println!("bearing to destination: {}", bearing(sender.position, dest)?);
    for c in dir_candidates(sender, &snap, &[VehicleId(0)]) {
        let dev = deviation_angle(sender.position, c.position, dest)?;
        println!("  neighbor {} at {:.1} deviates {:.1} deg", c.id, c.position, dev.degrees());
    }
    let pick = dir_next_hop(sender, dest, &snap, &[VehicleId(0)]).expect("sender has neighbors");
    println!("next hop: {}", pick.id);

    let res = route(Protocol::Dir, VehicleId(0), VehicleId(99), &snap, 0.0, 64)?;
    let path: Vec<String> = res.path.iter().map(|id| id.to_string()).collect();
    println!("{}: {} after {} hops", res.outcome, path.join(" -> "), res.hop_count);
    Ok(())
}
