use serde::{Deserialize, Serialize};

use super::predicates::{orientation, point_on_segment, segments_intersect, Orientation};
use super::{Point, Segment, EPS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winding {
    Ccw,
    Cw,
}

impl Winding {
    pub fn reversed(self) -> Winding {
        match self {
            Winding::Ccw => Winding::Cw,
            Winding::Cw => Winding::Ccw,
        }
    }
}

/// A simple closed polygon ring.
///
/// Construction canonicalizes the vertex list: consecutive duplicates and
/// collinear middle vertices are removed, and the ring is rotated to start at
/// its lexicographically smallest vertex. The stored winding always matches
/// the sign of the shoelace area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    vertices: Vec<Point>,
    winding: Winding,
}

impl Ring {
    /// Builds a ring from an open or closed vertex list, inferring winding.
    pub fn new(points: Vec<Point>) -> Result<Ring> {
        let vertices = canonicalize(points)?;
        let area2 = shoelace2(&vertices);
        if area2.abs() <= 1e-12 {
            return Err(Error::DegenerateRing("zero signed area"));
        }
        let ring = Ring {
            vertices,
            winding: if area2 > 0.0 { Winding::Ccw } else { Winding::Cw },
        };
        ring.check_simple()?;
        Ok(ring)
    }

    /// Builds a ring and reverses it if needed to match `winding`.
    pub fn with_winding(points: Vec<Point>, winding: Winding) -> Result<Ring> {
        let ring = Ring::new(points)?;
        Ok(if ring.winding == winding {
            ring
        } else {
            ring.reversed()
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn winding(&self) -> Winding {
        self.winding
    }

    pub fn signed_area(&self) -> f64 {
        shoelace2(&self.vertices) / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// (previous, vertex, next) triples in ring order.
    pub fn corners(&self) -> impl Iterator<Item = (Point, Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            (
                self.vertices[(i + n - 1) % n],
                self.vertices[i],
                self.vertices[(i + 1) % n],
            )
        })
    }

    pub fn reversed(&self) -> Ring {
        let mut v = self.vertices.clone();
        v[1..].reverse();
        Ring {
            vertices: v,
            winding: self.winding.reversed(),
        }
    }

    pub fn rotated(&self, theta: f64) -> Result<Ring> {
        Ring::with_winding(
            self.vertices.iter().map(|p| p.rotated(theta)).collect(),
            self.winding,
        )
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    /// Strict interior test by winding number; boundary points are not inside.
    pub fn contains_strict(&self, p: Point) -> bool {
        let mut wn = 0i32;
        for e in self.edges() {
            if e.a.y <= p.y && e.b.y > p.y {
                if orientation(e.a, e.b, p) == Orientation::Ccw {
                    wn += 1;
                }
            } else if e.a.y > p.y && e.b.y <= p.y && orientation(e.a, e.b, p) == Orientation::Cw {
                wn -= 1;
            }
        }
        wn != 0
    }

    pub fn on_boundary(&self, p: Point, tol: f64) -> bool {
        self.edges().any(|e| e.dist_to_point(p) <= tol)
    }

    /// Extent of the vertex projections onto the unit vector `(ux, uy)`.
    pub fn projected_extent(&self, ux: f64, uy: f64) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.vertices {
            let t = p.x * ux + p.y * uy;
            lo = lo.min(t);
            hi = hi.max(t);
        }
        hi - lo
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.vertices.len();
        let edges: Vec<Segment> = self.edges().collect();
        for i in 0..n {
            for (j, ej) in edges.iter().enumerate().skip(i + 1) {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(edges[i], *ej) {
                    return Err(Error::SelfIntersecting);
                }
            }
        }
        Ok(())
    }
}

fn shoelace2(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    acc
}

fn canonicalize(mut pts: Vec<Point>) -> Result<Vec<Point>> {
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    // Accept closed input (first vertex repeated at the end).
    if pts.len() > 1 && pts[0].approx_eq(*pts.last().unwrap(), EPS) {
        pts.pop();
    }

    // Drop consecutive duplicates, then exactly collinear middle vertices,
    // until stable; removals can expose new collinear triples.
    loop {
        let before = pts.len();
        let mut kept: Vec<Point> = Vec::with_capacity(pts.len());
        for p in pts.drain(..) {
            if kept.last().is_none_or(|last| !last.approx_eq(p, EPS)) {
                kept.push(p);
            }
        }
        if kept.len() > 1 && kept[0].approx_eq(*kept.last().unwrap(), EPS) {
            kept.pop();
        }
        let n = kept.len();
        if n >= 3 {
            let mut minimal = Vec::with_capacity(n);
            for i in 0..n {
                let prev = kept[(i + n - 1) % n];
                let next = kept[(i + 1) % n];
                if orientation(prev, kept[i], next) != Orientation::Collinear
                    || !point_on_segment(kept[i], Segment::new(prev, next))
                {
                    minimal.push(kept[i]);
                }
            }
            pts = minimal;
        } else {
            pts = kept;
        }
        if pts.len() == before {
            break;
        }
    }

    if pts.len() < 3 {
        return Err(Error::DegenerateRing("fewer than three vertices"));
    }

    // Deterministic start vertex: lexicographic minimum.
    let start = pts
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)))
        .map(|(i, _)| i)
        .unwrap();
    pts.rotate_left(start);
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn canonicalization_removes_duplicates_and_collinear() {
        let r = Ring::new(pts(&[
            (0.0, 0.0),
            (5.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (10.0, 10.0),
            (0.0, 10.0),
            (0.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.winding(), Winding::Ccw);
        assert_eq!(r.vertices()[0], Point::new(0.0, 0.0));
        assert!((r.area() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn winding_is_inferred_and_coercible() {
        let cw = Ring::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])).unwrap();
        assert_eq!(cw.winding(), Winding::Cw);
        let ccw = Ring::with_winding(
            pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]),
            Winding::Ccw,
        )
        .unwrap();
        assert_eq!(ccw.winding(), Winding::Ccw);
        assert!((ccw.signed_area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_intersection_is_rejected() {
        // Five-point star drawn without lifting the pen: nonzero area,
        // crossing edges.
        let star = Ring::new(pts(&[
            (0.0, 0.0),
            (2.0, 6.0),
            (4.0, 0.0),
            (0.0, 4.0),
            (4.0, 4.0),
        ]));
        assert!(matches!(star, Err(Error::SelfIntersecting)));
        // A bowtie cancels its own area before the simplicity check runs.
        let bowtie = Ring::new(pts(&[(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)]));
        assert!(bowtie.is_err());
    }

    #[test]
    fn degenerate_rings_are_rejected() {
        assert!(Ring::new(pts(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
        assert!(Ring::new(pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])).is_err());
        assert!(Ring::new(pts(&[(0.0, 0.0), (1.0, 1.0), (f64::NAN, 2.0)])).is_err());
    }

    #[test]
    fn strict_containment() {
        let r = Ring::new(pts(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)])).unwrap();
        assert!(r.contains_strict(Point::new(5.0, 5.0)));
        assert!(!r.contains_strict(Point::new(-1.0, 5.0)));
        assert!(!r.contains_strict(Point::new(10.0, 5.0))); // boundary is not strict
        assert!(r.on_boundary(Point::new(10.0, 5.0), EPS));
    }
}
