//! Vehicles moving with boundary reflection, and the stale positions
//! neighbors see between beacons.

use geo_route_sim::netsim::{beacon_view, generate_nodes, step_mobility, SimConfig};

fn main() -> geo_route_sim::Result<()> {
    let config = SimConfig { node_count: Some(4), beacon_interval: 2.0, time_step: 0.5, seed: 3, ..SimConfig::default() };
    let field = config.field();
    let mut snap = generate_nodes(&config)?;
    let mut t = 0.0;
    while t <= 4.0 {
        let view = beacon_view(&snap, t, config.beacon_interval, field)?;
        println!("t = {t:.1}");
        for v in snap.vehicles() {
            let seen = view[&v.id];
            println!(
                "  {} at {:.1} heading {:.1} (advertised {:.1}, off by {:.1} m)",
                v.id,
                v.position,
                v.heading,
                seen,
                seen.distance_to(&v.position)
            );
        }
        snap = step_mobility(&snap, config.time_step, field)?;
        t += config.time_step;
    }
    Ok(())
}
