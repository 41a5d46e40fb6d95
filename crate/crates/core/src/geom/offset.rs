use super::ring::Ring;
use super::{Point, PolygonWithHoles, EPS};
use crate::error::{Error, Result};

/// Miter join limit as a multiple of the offset distance.
const MITER_LIMIT: f64 = 4.0;

impl PolygonWithHoles {
    /// Erosion of the free space by `wall_distance`: the outer ring moves
    /// inward and holes grow outward, per-edge parallel translation with
    /// miter joins (bevel fallback past the miter limit).
    ///
    /// Erosions that empty the region, split it, invert a ring or bring
    /// holes into contact are reported as errors; the caller must reduce
    /// `wall_distance` or split the mission.
    pub fn offset_inward(&self, wall_distance: f64) -> Result<PolygonWithHoles> {
        if !(wall_distance >= 0.0) || !wall_distance.is_finite() {
            return Err(Error::InvalidParameter(
                "wall_distance must be a finite nonnegative number".into(),
            ));
        }
        let collapse = |reason: &str| Error::OffsetCollapsed {
            distance: wall_distance,
            reason: reason.to_string(),
        };

        let outer = offset_ring(self.outer(), wall_distance)
            .map_err(|e| collapse(&format!("outer boundary: {e}")))?;
        if outer.area() >= self.outer().area() + EPS {
            return Err(collapse("outer boundary failed to shrink"));
        }

        let mut holes = Vec::with_capacity(self.holes().len());
        for (i, hole) in self.holes().iter().enumerate() {
            let grown =
                offset_ring(hole, wall_distance).map_err(|e| collapse(&format!("hole {i}: {e}")))?;
            holes.push(grown);
        }

        PolygonWithHoles::new(outer, holes).map_err(|e| collapse(&e.to_string()))
    }
}

/// Shifts every edge of the ring toward the free space (left of the directed
/// edge, for CCW outer rings and CW holes alike) and joins neighbours.
fn offset_ring(ring: &Ring, d: f64) -> Result<Ring> {
    if d == 0.0 {
        return Ok(ring.clone());
    }
    let vs = ring.vertices();
    let n = vs.len();

    // Unit left normal per edge.
    let mut normals = Vec::with_capacity(n);
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        let len = a.dist(b);
        normals.push(Point::new(-(b.y - a.y) / len, (b.x - a.x) / len));
    }

    let mut out: Vec<Point> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let v = vs[i];
        let p_end = Point::new(v.x + d * normals[prev].x, v.y + d * normals[prev].y);
        let p_start = Point::new(v.x + d * normals[i].x, v.y + d * normals[i].y);
        if p_end.approx_eq(p_start, EPS) {
            out.push(p_start);
            continue;
        }
        match miter_point(vs, &normals, prev, i, d) {
            Some(m) if m.dist(v) <= MITER_LIMIT * d => out.push(m),
            _ => {
                out.push(p_end);
                out.push(p_start);
            }
        }
    }

    // Legitimate miter and bevel vertices sit at distance >= d from the
    // source ring; a vertex closer than that means the offset passed through
    // the opposite boundary (a pass-through can even preserve winding, e.g.
    // a square eroded past its center comes back out point-reflected).
    for p in &out {
        let dist = ring.edges().map(|e| e.dist_to_point(*p)).fold(f64::INFINITY, f64::min);
        if dist < d - 1e-6 {
            return Err(Error::DegenerateRing("offset collapsed through the boundary"));
        }
    }

    let offset = Ring::new(out)?;
    if offset.winding() != ring.winding() {
        return Err(Error::DegenerateRing("ring inverted by the offset"));
    }
    Ok(offset)
}

/// Intersection of the offset lines of edges `e1` and `e2` (meeting at
/// vertex `vs[i]`), or `None` when near-parallel.
fn miter_point(vs: &[Point], normals: &[Point], e1: usize, e2: usize, d: f64) -> Option<Point> {
    let n = vs.len();
    let a1 = offset_of(vs[e1], normals[e1], d);
    let d1 = direction(vs[e1], vs[(e1 + 1) % n]);
    let a2 = offset_of(vs[e2], normals[e2], d);
    let d2 = direction(vs[e2], vs[(e2 + 1) % n]);

    let denom = d1.x * d2.y - d1.y * d2.x;
    if denom.abs() < 1e-12 {
        return None;
    }
    let t = ((a2.x - a1.x) * d2.y - (a2.y - a1.y) * d2.x) / denom;
    Some(Point::new(a1.x + t * d1.x, a1.y + t * d1.y))
}

fn offset_of(p: Point, normal: Point, d: f64) -> Point {
    Point::new(p.x + d * normal.x, p.y + d * normal.y)
}

fn direction(a: Point, b: Point) -> Point {
    Point::new(b.x - a.x, b.y - a.y)
}
