use thiserror::Error;

use crate::routing::VehicleId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Direction is undefined because two points coincide.
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),

    #[error("invalid time window: t1 ({t1}) precedes t0 ({t0})")]
    InvalidTime { t0: f64, t1: f64 },

    #[error("invalid speed {0}: must be finite and non-negative")]
    InvalidSpeed(f64),

    #[error("unknown vehicle id {0}")]
    UnknownVehicle(VehicleId),

    #[error("duplicate vehicle id {0}")]
    DuplicateVehicle(VehicleId),

    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { field, reason: reason.into() }
    }
}
