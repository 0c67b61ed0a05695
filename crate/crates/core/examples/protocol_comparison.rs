//! DIR, LAR and D-LAR on identical scenarios across a density sweep.

use geo_route_sim::netsim::{compare_protocols, SimConfig};

fn main() -> geo_route_sim::Result<()> {
    let base = SimConfig::default();
    println!("{:>9} {:>5} {:>8} {:>8} {:>8}", "neighbors", "proto", "pdr", "hops", "delay_ms");
    for neighbors in [2.0, 6.0, 12.0, 20.0] {
        let mut totals = [(0u64, 0u64, 0.0f64, 0u64); 3];
        for seed in 0..10 {
            let config = SimConfig { density: base.density_for_mean_neighbors(neighbors), seed, ..base.clone() };
            for (slot, m) in totals.iter_mut().zip(compare_protocols(&config)?) {
                slot.0 += m.sent;
                slot.1 += m.delivered;
                if let Some(h) = m.mean_hop_count {
                    slot.2 += h * m.delivered as f64;
                    slot.3 += m.delivered;
                }
            }
        }
        for (protocol, (sent, delivered, hop_sum, n)) in geo_route_sim::Protocol::ALL.iter().zip(totals) {
            let hops = if n > 0 { hop_sum / n as f64 } else { f64::NAN };
            let pdr = delivered as f64 / sent.max(1) as f64;
            println!(
                "{neighbors:>9} {:>5} {pdr:>8.3} {hops:>8.2} {:>8.2}",
                protocol.as_str(),
                hops * base.per_hop_latency_ms
            );
        }
    }
    Ok(())
}
