//! Expected and request zones for zone-restricted route discovery.

use crate::error::{Error, Result};
use crate::geometry::Position;

/// Disk where the destination may be found at discovery time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedZone {
    pub center: Position,
    pub radius: f64,
}

impl ExpectedZone {
    pub fn contains(&self, p: Position) -> bool {
        self.center.distance_to(&p) <= self.radius
    }
}

/// Axis-aligned rectangle; only nodes inside it relay route requests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequestZone {
    pub min_corner: Position,
    pub max_corner: Position,
}

impl RequestZone {
    /// Boundary-inclusive membership test.
    pub fn contains(&self, p: Position) -> bool {
        in_request_zone(p, self)
    }

    pub fn width(&self) -> f64 {
        self.max_corner.x - self.min_corner.x
    }

    pub fn height(&self) -> f64 {
        self.max_corner.y - self.min_corner.y
    }

    /// True if `other` lies entirely within `self`.
    pub fn encloses(&self, other: &RequestZone) -> bool {
        self.contains(other.min_corner) && self.contains(other.max_corner)
    }
}

/// Builds the expected zone of a destination last seen at `dest_pos_t0`
/// (time `t0`) moving at `dest_speed`, evaluated at time `t1`.
pub fn expected_zone(dest_pos_t0: Position, dest_speed: f64, t0: f64, t1: f64) -> Result<ExpectedZone> {
    if !(dest_speed >= 0.0) || !dest_speed.is_finite() {
        return Err(Error::InvalidSpeed(dest_speed));
    }
    if !(t1 >= t0) {
        return Err(Error::InvalidTime { t0, t1 });
    }
    Ok(ExpectedZone { center: dest_pos_t0, radius: dest_speed * (t1 - t0) })
}

/// Smallest axis-aligned rectangle holding both `source` and the disk of `ez`.
pub fn request_zone(source: Position, ez: &ExpectedZone) -> RequestZone {
    let (c, r) = (ez.center, ez.radius);
    RequestZone {
        min_corner: Position::new(source.x.min(c.x - r), source.y.min(c.y - r)),
        max_corner: Position::new(source.x.max(c.x + r), source.y.max(c.y + r)),
    }
}

pub fn in_request_zone(p: Position, rz: &RequestZone) -> bool {
    rz.min_corner.x <= p.x && p.x <= rz.max_corner.x && rz.min_corner.y <= p.y && p.y <= rz.max_corner.y
}
