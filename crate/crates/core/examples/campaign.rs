//! One seeded campaign with per-flow trace and the metrics CSV row.

use geo_route_sim::netsim::{run_campaign_traced, write_metrics_csv, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SimConfig { flows: 12, seed: 42, ..SimConfig::default() };
    let config = SimConfig { density: config.density_for_mean_neighbors(12.0), ..config };
    let (metrics, flows) = run_campaign_traced(&config)?;

    println!("{} vehicles, digest {:016x}", metrics.node_count, metrics.scenario_digest);
    for f in &flows {
        println!(
            "t={:>5.1} {:>3} -> {:<3} {:<16} hops {:>2} length {:>7.1} m",
            f.time,
            f.source.to_string(),
            f.dest.to_string(),
            f.result.outcome.to_string(),
            f.result.hop_count,
            f.path_length_m
        );
    }
    println!();
    write_metrics_csv(&mut std::io::stdout(), [(&config, &metrics)])?;
    Ok(())
}
