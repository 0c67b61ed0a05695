//! Probability of at least k vehicles in range, analytic and sampled.

use geo_route_sim::feasibility::{
    feasibility_table, mean_node_count, monte_carlo_at_least_k, FeasibilityParams, RegionKind,
};

fn main() -> geo_route_sim::Result<()> {
    let tx_range = 250.0;
    let densities = [0.0002, 0.0004];
    for region in RegionKind::ALL {
        println!("{region} region, R = {tx_range} m");
        println!("{:>3} {:>12} {:>12}", "k", densities[0], densities[1]);
        let table = feasibility_table(&densities, tx_range, 10, region)?;
        for k in 1..=10 {
            let p: Vec<f64> = table.iter().filter(|r| r.k == k).map(|r| r.probability).collect();
            println!("{k:>3} {:>12.6} {:>12.6}", p[0], p[1]);
        }
    }

    let params = FeasibilityParams::new(0.0002, tx_range, 12)?;
    let mean = mean_node_count(&params, RegionKind::QuarterCircle);
    let mc = monte_carlo_at_least_k(&params, RegionKind::QuarterCircle, 50_000, 7)?;
    println!(
        "quarter region, mean {mean:.3}: P(N >= 12) sampled {:.4} +/- {:.4} over {} trials",
        mc.estimate, mc.stderr, mc.trials
    );
    Ok(())
}
