//! Poisson connectivity analysis for next-hop availability.
//!
//! Nodes form a homogeneous planar Poisson process with density `λ`. The
//! number of nodes within range `R` of a forwarder is Poisson with mean
//! `λπR²`; restricted to the quarter of that disk that overlaps the request
//! zone the mean is `λπR²/4`. The probability that at least `k` candidates
//! are available is the upper tail of that distribution.
//!
//! [`monte_carlo_at_least_k`] estimates the same quantity by dropping points
//! into a bounding box and counting the ones that land in the region, so it
//! never touches the probability mass function.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityParams {
    /// Nodes per square meter.
    pub density: f64,
    /// Transmission range in meters.
    pub tx_range: f64,
    /// Minimum number of candidates.
    pub k: u32,
}

impl FeasibilityParams {
    pub fn new(density: f64, tx_range: f64, k: u32) -> Result<Self> {
        if !(density > 0.0) || !density.is_finite() {
            return Err(Error::invalid("density", "must be a finite value > 0"));
        }
        if !(tx_range > 0.0) || !tx_range.is_finite() {
            return Err(Error::invalid("tx_range", "must be a finite value > 0"));
        }
        Ok(Self { density, tx_range, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionKind {
    /// Whole transmission disk.
    FullCircle,
    /// One quadrant of the transmission disk.
    QuarterCircle,
}

impl RegionKind {
    pub const ALL: [RegionKind; 2] = [RegionKind::FullCircle, RegionKind::QuarterCircle];

    pub fn area(self, radius: f64) -> f64 {
        let full = PI * radius * radius;
        match self {
            RegionKind::FullCircle => full,
            RegionKind::QuarterCircle => full / 4.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegionKind::FullCircle => "full",
            RegionKind::QuarterCircle => "quarter",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" | "full_circle" => Ok(RegionKind::FullCircle),
            "quarter" | "quarter_circle" => Ok(RegionKind::QuarterCircle),
            other => Err(Error::invalid("region", format!("unknown region `{other}`"))),
        }
    }
}

/// Expected node count in the region: `λπR²` or `λπR²/4`.
pub fn mean_node_count(params: &FeasibilityParams, region: RegionKind) -> f64 {
    params.density * region.area(params.tx_range)
}

/// `meanⁿ e^(−mean) / n!`, evaluated in log space.
pub fn poisson_pmf(n: u64, mean: f64) -> f64 {
    debug_assert!(mean >= 0.0);
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let n_f = n as f64;
    (n_f * mean.ln() - mean - ln_gamma(n_f + 1.0)).exp()
}

/// `P[N ≥ k]` for `N ~ Poisson(mean)`, clamped to `[0, 1]`.
pub fn prob_at_least_k(k: u32, mean: f64) -> f64 {
    let below: f64 = (0..k as u64).map(|n| poisson_pmf(n, mean)).sum();
    (1.0 - below).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Binomial standard error of `estimate`.
    pub stderr: f64,
    pub trials: u64,
}

impl McEstimate {
    /// Fraction of `counts` that reach `k`.
    pub fn from_counts(counts: &[u32], k: u32) -> Self {
        let trials = counts.len() as u64;
        let hits = counts.iter().filter(|&&c| c >= k).count() as f64;
        let p = if trials == 0 { 0.0 } else { hits / trials as f64 };
        let stderr = if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() };
        Self { estimate: p, stderr, trials }
    }
}

/// Axis-aligned box holding the region, as (min_x, min_y, side).
///
/// The quarter disk is the `x ≥ 0, y ≥ 0` quadrant.
fn bounding_box(region: RegionKind, radius: f64) -> (f64, f64, f64) {
    match region {
        RegionKind::FullCircle => (-radius, -radius, 2.0 * radius),
        RegionKind::QuarterCircle => (0.0, 0.0, radius),
    }
}

/// Per-trial RNG: stream `trial` of the generator seeded by `seed`.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Number of points of one Poisson process realization falling inside the
/// region.
///
/// The box count is generated from unit-rate exponential arrivals on
/// `[0, λ·box_area]`; each arrival becomes a uniform point in the box.
fn sample_region_count(rng: &mut ChaCha8Rng, density: f64, radius: f64, region: RegionKind) -> u32 {
    let (x0, y0, side) = bounding_box(region, radius);
    let horizon = density * side * side;
    let r2 = radius * radius;
    let mut t: f64 = rng.sample(Exp1);
    let mut inside = 0;
    while t <= horizon {
        let x = x0 + side * rng.random::<f64>();
        let y = y0 + side * rng.random::<f64>();
        if x * x + y * y <= r2 {
            inside += 1;
        }
        t += rng.sample::<f64, _>(Exp1);
    }
    inside
}

/// Region counts for `trials` independent realizations, ordered by trial
/// index. Trials run in parallel; the result does not depend on scheduling.
pub fn sample_region_counts(density: f64, tx_range: f64, region: RegionKind, trials: u64, seed: u64) -> Vec<u32> {
    (0..trials)
        .into_par_iter()
        .map(|trial| sample_region_count(&mut trial_rng(seed, trial), density, tx_range, region))
        .collect()
}

/// Point-process estimate of `P[at least k nodes in region]`.
pub fn monte_carlo_at_least_k(params: &FeasibilityParams, region: RegionKind, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let counts = sample_region_counts(params.density, params.tx_range, region, trials, seed);
    Ok(McEstimate::from_counts(&counts, params.k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityRow {
    pub density: f64,
    pub k: u32,
    pub region: RegionKind,
    pub probability: f64,
}

/// `prob_at_least_k` for `k = 1..=k_max` at every density, rows ordered by
/// (density, k). Densities are sorted ascending.
pub fn feasibility_table(densities: &[f64], tx_range: f64, k_max: u32, region: RegionKind) -> Result<Vec<FeasibilityRow>> {
    if k_max < 1 {
        return Err(Error::invalid("k_max", "must be at least 1"));
    }
    let mut sorted = densities.to_vec();
    for &d in &sorted {
        FeasibilityParams::new(d, tx_range, 0)?;
    }
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(sorted.len() * k_max as usize);
    for density in sorted {
        let mean = mean_node_count(&FeasibilityParams { density, tx_range, k: 0 }, region);
        rows.extend((1..=k_max).map(|k| FeasibilityRow { density, k, region, probability: prob_at_least_k(k, mean) }));
    }
    Ok(rows)
}
