//! `geo-route-sim` front end.
//!
//! ```text
//! geo-route-sim <analyze|simulate|compare> [--config PATH] [--out PATH] [--seed N]
//!               [--mc-trials N] [--sweep key=lo:hi:steps] [key=value ...]
//! ```
//!
//! Configuration files are flat `key = value` lines; `#` starts a comment.
//! Every key is optional. Positional `key=value` arguments override the
//! file, and the dedicated flags override both.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feasibility::{feasibility_table, sample_region_counts, FeasibilityParams, McEstimate, RegionKind};
use crate::netsim::{compare_protocols, metrics_csv_row, run_sweep, SimConfig, METRICS_CSV_HEADER};

/// Keys accepted in configuration text, in canonical print order.
pub const KNOWN_KEYS: &[&str] = &[
    "field_width",
    "field_height",
    "density",
    "node_count",
    "tx_range",
    "speed_min",
    "speed_max",
    "beacon_interval",
    "duration",
    "time_step",
    "protocol",
    "flows",
    "seed",
    "ttl",
    "per_hop_latency_ms",
    "replicates",
    "densities",
    "k_max",
    "mc_trials",
];

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Nodes per square meter.
    pub densities: Vec<f64>,
    pub k_max: u32,
    pub mc_trials: Option<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { densities: vec![0.0002, 0.0004], k_max: 10, mc_trials: None }
    }
}

/// Everything a configuration file can set.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub sim: SimConfig,
    pub analysis: AnalysisConfig,
    /// Consecutive seeds run per sweep cell, starting at `sim.seed`.
    pub replicates: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Self { sim: SimConfig::default(), analysis: AnalysisConfig::default(), replicates: 1 }
    }
}

fn parse_num<T: std::str::FromStr>(key: &'static str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::invalid(key, format!("cannot parse `{value}`")))
}

impl Settings {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let key = KNOWN_KEYS
            .iter()
            .copied()
            .find(|k| *k == key.trim())
            .ok_or_else(|| Error::invalid("key", format!("unknown key `{}`", key.trim())))?;
        let sim = &mut self.sim;
        match key {
            "field_width" => sim.field_width = parse_num(key, value)?,
            "field_height" => sim.field_height = parse_num(key, value)?,
            "density" => sim.density = parse_num(key, value)?,
            "node_count" => {
                sim.node_count = match value {
                    "auto" | "" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "tx_range" => sim.tx_range = parse_num(key, value)?,
            "speed_min" => sim.speed_min = parse_num(key, value)?,
            "speed_max" => sim.speed_max = parse_num(key, value)?,
            "beacon_interval" => sim.beacon_interval = parse_num(key, value)?,
            "duration" => sim.duration = parse_num(key, value)?,
            "time_step" => sim.time_step = parse_num(key, value)?,
            "protocol" => sim.protocol = value.parse()?,
            "flows" => sim.flows = parse_num(key, value)?,
            "seed" => sim.seed = parse_num(key, value)?,
            "ttl" => sim.ttl = parse_num(key, value)?,
            "per_hop_latency_ms" => sim.per_hop_latency_ms = parse_num(key, value)?,
            "replicates" => self.replicates = parse_num(key, value)?,
            "densities" => {
                self.analysis.densities =
                    value.split(',').map(|d| parse_num("densities", d.trim())).collect::<Result<_>>()?
            }
            "k_max" => self.analysis.k_max = parse_num(key, value)?,
            "mc_trials" => {
                self.analysis.mc_trials = match value {
                    "off" | "" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            _ => unreachable!("key list and match arms disagree"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.sim.validate()?;
        if self.analysis.densities.is_empty() {
            return Err(Error::invalid("densities", "at least one density is required"));
        }
        for &d in &self.analysis.densities {
            FeasibilityParams::new(d, self.sim.tx_range, 0).map_err(|_| Error::invalid("densities", format!("{d} is not > 0")))?;
        }
        if self.analysis.k_max < 1 {
            return Err(Error::invalid("k_max", "must be at least 1"));
        }
        if self.analysis.mc_trials == Some(0) {
            return Err(Error::invalid("mc_trials", "must be at least 1"));
        }
        if self.replicates < 1 {
            return Err(Error::invalid("replicates", "must be at least 1"));
        }
        Ok(())
    }

    /// Canonical text form; [`parse_config`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let s = &self.sim;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("field_width", s.field_width.to_string());
        line("field_height", s.field_height.to_string());
        line("density", s.density.to_string());
        line("node_count", s.node_count.map_or_else(|| "auto".to_string(), |n| n.to_string()));
        line("tx_range", s.tx_range.to_string());
        line("speed_min", s.speed_min.to_string());
        line("speed_max", s.speed_max.to_string());
        line("beacon_interval", s.beacon_interval.to_string());
        line("duration", s.duration.to_string());
        line("time_step", s.time_step.to_string());
        line("protocol", s.protocol.to_string());
        line("flows", s.flows.to_string());
        line("seed", s.seed.to_string());
        line("ttl", s.ttl.to_string());
        line("per_hop_latency_ms", s.per_hop_latency_ms.to_string());
        line("replicates", self.replicates.to_string());
        line("densities", self.analysis.densities.iter().map(f64::to_string).collect::<Vec<_>>().join(", "));
        line("k_max", self.analysis.k_max.to_string());
        line("mc_trials", self.analysis.mc_trials.map_or_else(|| "off".to_string(), |n| n.to_string()));
        out
    }
}

/// Parses and validates flat `key = value` text on top of the defaults.
pub fn parse_config(text: &str) -> Result<Settings> {
    let mut settings = Settings::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: line_no, message: format!("expected `key = value`, found `{line}`") })?;
        settings.set(key, value).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
    }
    settings.validate()?;
    Ok(settings)
}

/// `key=lo:hi:steps`: `steps` evenly spaced values from `lo` to `hi`
/// inclusive, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::invalid("sweep", format!("`{spec}`: {why}"));
        let (key, range) = spec.split_once('=').ok_or_else(|| bad("expected key=lo:hi:steps"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(bad("expected key=lo:hi:steps"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("hi is not a number"))?;
        let steps: usize = steps.trim().parse().map_err(|_| bad("steps is not a positive integer"))?;
        if steps == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad("steps must be >= 1 and bounds finite"));
        }
        let mut values: Vec<f64> = if steps == 1 {
            vec![lo]
        } else {
            (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
        };
        values.sort_by(f64::total_cmp);
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(bad("unknown key"));
        }
        Ok(Self { key, values })
    }
}

/// Simulation cells in output order: sweep value, then replicate seed.
pub fn expand_cells(settings: &Settings, sweep: Option<&Sweep>) -> Result<Vec<SimConfig>> {
    let bases = match sweep {
        None => vec![settings.clone()],
        Some(sw) => sw
            .values
            .iter()
            .map(|v| {
                let mut s = settings.clone();
                s.set(&sw.key, &v.to_string())?;
                s.validate()?;
                Ok(s)
            })
            .collect::<Result<_>>()?,
    };
    Ok(bases
        .into_iter()
        .flat_map(|s| {
            (0..u64::from(s.replicates)).map(move |r| SimConfig { seed: s.sim.seed.wrapping_add(r), ..s.sim.clone() })
        })
        .collect())
}

/// Feasibility CSV for both regions (full circle first), densities
/// ascending, `k = 1..=k_max`. With Monte Carlo enabled every row gains
/// `mc_estimate,mc_stderr`.
pub fn cmd_analyze(settings: &Settings) -> Result<String> {
    settings.validate()?;
    let a = &settings.analysis;
    let tx_range = settings.sim.tx_range;
    let mut out = String::from("density,k,region,probability");
    if a.mc_trials.is_some() {
        out.push_str(",mc_estimate,mc_stderr");
    }
    out.push('\n');
    let mut cell = 0u64;
    for region in RegionKind::ALL {
        let rows = feasibility_table(&a.densities, tx_range, a.k_max, region)?;
        for chunk in rows.chunk_by(|x, y| x.density == y.density) {
            let counts = a.mc_trials.map(|trials| {
                let seed = settings.sim.seed ^ (cell << 32);
                sample_region_counts(chunk[0].density, tx_range, region, trials, seed)
            });
            cell += 1;
            for row in chunk {
                let _ = write!(out, "{},{},{},{:.9e}", row.density, row.k, row.region, row.probability);
                if let Some(counts) = &counts {
                    let mc = McEstimate::from_counts(counts, row.k);
                    let _ = write!(out, ",{:.9e},{:.9e}", mc.estimate, mc.stderr);
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// Metrics CSV with one row per (sweep value, seed) cell.
pub fn cmd_simulate(settings: &Settings, sweep: Option<&Sweep>) -> Result<String> {
    settings.validate()?;
    let cells = expand_cells(settings, sweep)?;
    let metrics = run_sweep(&cells)?;
    let mut out = format!("{METRICS_CSV_HEADER}\n");
    for (cfg, m) in cells.iter().zip(&metrics) {
        out.push_str(&metrics_csv_row(cfg, m));
        out.push('\n');
    }
    Ok(out)
}

/// Like [`cmd_simulate`] but every cell is run under dir, lar and dlar on
/// the same placement and flow schedule.
pub fn cmd_compare(settings: &Settings, sweep: Option<&Sweep>) -> Result<String> {
    settings.validate()?;
    let cells = expand_cells(settings, sweep)?;
    let per_cell: Vec<_> = cells.par_iter().map(compare_protocols).collect::<Result<_>>()?;
    let mut out = format!("{METRICS_CSV_HEADER}\n");
    for (cfg, results) in cells.iter().zip(&per_cell) {
        for m in results {
            out.push_str(&metrics_csv_row(cfg, m));
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Analyze,
    Simulate,
    Compare,
}

#[derive(Debug, Parser)]
#[command(name = "geo-route-sim", version, about = "Position-based VANET routing simulator and feasibility analysis")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Add Monte Carlo columns to `analyze`, with this many trials per row.
    #[arg(long = "mc-trials")]
    mc_trials: Option<u64>,
    /// Sweep one key: `key=lo:hi:steps`.
    #[arg(long)]
    sweep: Option<String>,
    /// `key=value` overrides applied after the config file.
    overrides: Vec<String>,
}

/// Failure with the process exit code it maps to: 1 for usage and
/// configuration errors, 2 for runtime (I/O) errors.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }
}

fn load_settings(args: &Args) -> Result<Settings, CliError> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut settings = parse_config(&text).map_err(CliError::usage)?;
    for kv in &args.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("override `{kv}` is not key=value")))?;
        settings.set(k, v).map_err(CliError::usage)?;
    }
    if let Some(seed) = args.seed {
        settings.sim.seed = seed;
    }
    if let Some(trials) = args.mc_trials {
        settings.analysis.mc_trials = Some(trials);
    }
    settings.validate().map_err(CliError::usage)?;
    Ok(settings)
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::usage(e.render())),
    };
    let settings = load_settings(&args)?;
    let sweep = args.sweep.as_deref().map(Sweep::parse).transpose().map_err(CliError::usage)?;
    let csv = match args.command {
        Command::Analyze => {
            if sweep.is_some() {
                return Err(CliError::usage("--sweep applies to simulate and compare only"));
            }
            cmd_analyze(&settings)
        }
        Command::Simulate => cmd_simulate(&settings, sweep.as_ref()),
        Command::Compare => cmd_compare(&settings, sweep.as_ref()),
    }
    .map_err(|e| match e {
        Error::Invalid { .. } | Error::Parse { .. } => CliError::usage(e),
        other => CliError::runtime(other),
    })?;
    match &args.out {
        Some(path) => fs::write(path, csv).map_err(|e| CliError::runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
