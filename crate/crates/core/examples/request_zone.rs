//! Expected and request zones, and a LAR discovery that fails because the
//! only relay sits outside the request zone.

use geo_route_sim::routing::lar_route_discovery;
use geo_route_sim::zones::{expected_zone, in_request_zone, request_zone};
use geo_route_sim::{NetworkSnapshot, Packet, Position, Vehicle, VehicleId};

fn main() -> geo_route_sim::Result<()> {
    let source = Position::new(0.0, 0.0);
    let dest_seen = Position::new(300.0, 0.0);

    for elapsed in [0.0, 2.0, 10.0] {
        let ez = expected_zone(dest_seen, 10.0, 0.0, elapsed)?;
        let rz = request_zone(source, &ez);
        println!(
            "after {elapsed:>4}s: radius {:>5.1}, zone [{}, {}] ({:.0} x {:.0} m)",
            ez.radius,
            rz.min_corner,
            rz.max_corner,
            rz.width(),
            rz.height()
        );
    }

    let relay = Position::new(150.0, 100.0);
    let rz = request_zone(source, &expected_zone(dest_seen, 10.0, 0.0, 2.0)?);
    println!("relay {relay} in zone: {}", in_request_zone(relay, &rz));

    let snap = NetworkSnapshot::new(
        vec![Vehicle::parked(0, source), Vehicle::parked(1, dest_seen), Vehicle::parked(2, relay)],
        200.0,
    )?;
    let packet = Packet::new(VehicleId(0), VehicleId(1), dest_seen, 10.0, 0.0, 64);
    for now in [2.0, 12.0] {
        let res = lar_route_discovery(VehicleId(0), &packet, &snap, now)?;
        println!("discovery at t={now}: {} ({} hops)", res.outcome, res.hop_count);
    }
    Ok(())
}
