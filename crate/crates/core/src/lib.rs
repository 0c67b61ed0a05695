//! Position-based routing for vehicular ad hoc networks.
//!
//! The crate bundles three greedy/zone-based routing strategies and the
//! analytical tools used to judge whether they are feasible at a given
//! vehicle density:
//!
//! - [`routing`]: compass routing (DIR), request-zone flooding (LAR) and the
//!   directional hybrid (D-LAR), all as pure decisions over a
//!   [`routing::NetworkSnapshot`].
//! - [`zones`]: expected/request zone construction and membership.
//! - [`feasibility`]: Poisson node counts and "at least k candidates"
//!   probabilities, with a point-process Monte Carlo cross-check.
//! - [`netsim`]: seeded node placement, constant-velocity mobility, stale
//!   beacon views and routing campaigns that produce delivery metrics.
//! - [`cli`]: the `geo-route-sim` front end (`analyze`, `simulate`,
//!   `compare`) and its flat `key = value` configuration format.
//!
//! Runnable walkthroughs for each capability live in this crate's
//! `examples/` directory:
//!
//! ```bash
//! cargo run -p geo-route-sim --example compass_routing
//! cargo run -p geo-route-sim --example dlar_chain
//! cargo run -p geo-route-sim --example feasibility_curves
//! ```

pub mod cli;
pub mod error;
pub mod feasibility;
pub mod geometry;
pub mod netsim;
pub mod routing;
pub mod zones;

pub use error::{Error, Result};
pub use geometry::{Angle, Position};
pub use routing::{NetworkSnapshot, Outcome, Packet, Protocol, RouteResult, Vehicle, VehicleId};
