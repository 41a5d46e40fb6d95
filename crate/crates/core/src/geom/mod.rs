//! Planar geometry for coverage planning: points, rings, polygons with
//! holes, robust predicates, monotonicity tests, rotation and inward
//! offsetting.
//!
//! Sign decisions go through adaptive-precision predicates; constructions
//! (intersections, offsets) are inexact and snapped at [`EPS`].

mod monotone;
mod offset;
mod predicates;
mod pwh;
mod ring;

pub use monotone::is_monotone;
pub use predicates::{orientation, Orientation};
pub use pwh::PolygonWithHoles;
pub use ring::{Ring, Winding};

use serde::{Deserialize, Serialize};

/// Global snapping tolerance for inexact constructions, in meters.
pub const EPS: f64 = 1e-9;

/// Tolerance for comparing undirected edge directions, in radians.
pub const ANGLE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Rotation about the origin by `theta` radians (counter-clockwise).
    pub fn rotated(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }

    pub fn approx_eq(self, other: Point, tol: f64) -> bool {
        self.dist_sq(other) <= tol * tol
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(self) -> Point {
        Point::new((self.a.x + self.b.x) / 2.0, (self.a.y + self.b.y) / 2.0)
    }

    /// Point at parameter `t` (0 at `a`, 1 at `b`).
    pub fn eval(self, t: f64) -> Point {
        Point::new(
            self.a.x + t * (self.b.x - self.a.x),
            self.a.y + t * (self.b.y - self.a.y),
        )
    }

    pub fn dist_to_point(self, p: Point) -> f64 {
        let len_sq = self.a.dist_sq(self.b);
        if len_sq == 0.0 {
            return self.a.dist(p);
        }
        let t = ((p.x - self.a.x) * (self.b.x - self.a.x) + (p.y - self.a.y) * (self.b.y - self.a.y))
            / len_sq;
        self.eval(t.clamp(0.0, 1.0)).dist(p)
    }

    pub fn dist_to_segment(self, other: Segment) -> f64 {
        if predicates::segments_intersect(self, other) {
            return 0.0;
        }
        self.dist_to_point(other.a)
            .min(self.dist_to_point(other.b))
            .min(other.dist_to_point(self.a))
            .min(other.dist_to_point(self.b))
    }
}

/// Undirected line direction in radians, normalized to `[0, π)`.
///
/// Angles equal modulo π compare equal: a sweep or scan direction has no
/// orientation sense.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectionAngle(f64);

impl DirectionAngle {
    pub fn new(theta: f64) -> Self {
        assert!(theta.is_finite(), "direction angle must be finite");
        let mut t = theta % std::f64::consts::PI;
        if t < 0.0 {
            t += std::f64::consts::PI;
        }
        // Values within tolerance of π wrap to 0 so the representative is unique.
        if std::f64::consts::PI - t <= ANGLE_EPS {
            t = 0.0;
        }
        DirectionAngle(t + 0.0) // normalize -0.0
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Unit vector along the direction.
    pub fn unit(self) -> (f64, f64) {
        (self.0.cos(), self.0.sin())
    }

    pub fn perpendicular(self) -> DirectionAngle {
        DirectionAngle::new(self.0 + std::f64::consts::FRAC_PI_2)
    }

    pub fn of_segment(a: Point, b: Point) -> DirectionAngle {
        DirectionAngle::new((b.y - a.y).atan2(b.x - a.x))
    }

    /// Circular distance modulo π.
    pub fn dist(self, other: DirectionAngle) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(std::f64::consts::PI - d)
    }

    pub fn approx_eq(self, other: DirectionAngle, tol: f64) -> bool {
        self.dist(other) <= tol
    }
}

/// Sorts and deduplicates directions with the angular tolerance `tol`,
/// treating the interval as circular modulo π.
pub fn dedup_directions(mut dirs: Vec<DirectionAngle>, tol: f64) -> Vec<DirectionAngle> {
    dirs.sort_by(|a, b| a.radians().total_cmp(&b.radians()));
    let mut out: Vec<DirectionAngle> = Vec::with_capacity(dirs.len());
    for d in dirs {
        if out.last().is_none_or(|last| !last.approx_eq(d, tol)) {
            out.push(d);
        }
    }
    if out.len() > 1 && out[0].approx_eq(*out.last().unwrap(), tol) {
        out.pop();
    }
    out
}
