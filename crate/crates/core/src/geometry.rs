//! Planar primitives used by every forwarding rule.
//!
//! Angles are kept in radians. Bearings are full-quadrant (`atan2`) so that
//! nodes west of the sender get their true direction.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Planar coordinate in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance to `other`.
    pub fn distance_to(&self, other: &Position) -> f64 {
        distance(*self, *other)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Position {
        Position::new(self.x + dx, self.y + dy)
    }

    /// Rotates counter-clockwise by `radians` about `pivot`.
    pub fn rotated_about(&self, pivot: Position, radians: f64) -> Position {
        let (sin, cos) = radians.sin_cos();
        let (dx, dy) = (self.x - pivot.x, self.y - pivot.y);
        Position::new(pivot.x + dx * cos - dy * sin, pivot.y + dx * sin + dy * cos)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.p$}, {:.p$})", self.x, self.y),
            None => write!(f, "({}, {})", self.x, self.y),
        }
    }
}

/// Angle in radians.
///
/// Bearings live in `(-π, π]`, deviations in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn from_radians(radians: f64) -> Self {
        Angle(radians)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Angle(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Same direction expressed in `(-π, π]`.
    pub fn wrapped(self) -> Angle {
        Angle(wrap_pi(self.0))
    }

    /// Unsigned smallest rotation between two directions, in `[0, π]`.
    pub fn separation(self, other: Angle) -> Angle {
        Angle(wrap_pi(self.0 - other.0).abs())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}°", self.degrees())
    }
}

/// Wraps any finite angle into `(-π, π]`.
pub fn wrap_pi(radians: f64) -> f64 {
    let mut r = radians % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

pub fn distance(a: Position, b: Position) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    (dx * dx + dy * dy).sqrt()
}

/// Direction of travel from `from` to `to`, measured from the +x axis.
pub fn bearing(from: Position, to: Position) -> Result<Angle> {
    if from == to {
        return Err(Error::Degenerate("bearing between coincident points"));
    }
    // atan2 returns -π for (-0.0, negative x); fold it onto +π.
    Ok(Angle(wrap_pi((to.y - from.y).atan2(to.x - from.x))))
}

/// Unsigned angle at `s` between the rays toward `candidate` and toward `d`.
///
/// This is the quantity compass routing minimizes. It is zero exactly when
/// the candidate sits on the ray from `s` through `d`.
pub fn deviation_angle(s: Position, candidate: Position, d: Position) -> Result<Angle> {
    if candidate == s {
        return Err(Error::Degenerate("candidate coincides with sender"));
    }
    if d == s {
        return Err(Error::Degenerate("destination coincides with sender"));
    }
    let (ax, ay) = (candidate.x - s.x, candidate.y - s.y);
    let (bx, by) = (d.x - s.x, d.y - s.y);
    let cross = ax * by - ay * bx;
    let dot = ax * bx + ay * by;
    Ok(Angle(cross.abs().atan2(dot)))
}
