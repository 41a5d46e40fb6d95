use serde::{Deserialize, Serialize};

use super::predicates::{crossing_params, segments_intersect};
use super::ring::{Ring, Winding};
use super::{dedup_directions, DirectionAngle, Point, Segment, ANGLE_EPS, EPS};
use crate::error::{Error, Result};

/// A flight corridor: one outer ring (CCW) minus zero or more hole rings
/// (CW, strictly inside the outer ring and pairwise disjoint).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonWithHoles {
    outer: Ring,
    holes: Vec<Ring>,
}

impl PolygonWithHoles {
    pub fn new(outer: Ring, holes: Vec<Ring>) -> Result<Self> {
        let outer = coerce(outer, Winding::Ccw);
        let holes: Vec<Ring> = holes.into_iter().map(|h| coerce(h, Winding::Cw)).collect();
        let pwh = PolygonWithHoles { outer, holes };
        pwh.validate()?;
        Ok(pwh)
    }

    /// Outer ring only, no holes.
    pub fn simple(outer: Ring) -> Result<Self> {
        PolygonWithHoles::new(outer, Vec::new())
    }

    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    pub fn area(&self) -> f64 {
        self.outer.area() - self.holes.iter().map(Ring::area).sum::<f64>()
    }

    pub fn hole_vertex_count(&self) -> usize {
        self.holes.iter().map(Ring::len).sum()
    }

    pub fn bbox(&self) -> (Point, Point) {
        self.outer.bbox()
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> + '_ {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = Segment> + '_ {
        self.rings().flat_map(|r| r.edges())
    }

    /// Rotates every vertex about the origin by `theta` radians.
    pub fn rotate(&self, theta: f64) -> Result<PolygonWithHoles> {
        let outer = self.outer.rotated(theta)?;
        let holes = self
            .holes
            .iter()
            .map(|h| h.rotated(theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolygonWithHoles { outer, holes })
    }

    /// Undirected edge directions over all rings, deduplicated modulo π.
    pub fn edge_directions(&self) -> Vec<DirectionAngle> {
        let dirs = self
            .boundary_edges()
            .map(|e| DirectionAngle::of_segment(e.a, e.b))
            .collect();
        dedup_directions(dirs, ANGLE_EPS)
    }

    /// Closed free-space membership: the boundary belongs to the region.
    pub fn contains_point(&self, p: Point) -> bool {
        if self.rings().any(|r| r.on_boundary(p, EPS)) {
            return true;
        }
        self.outer.contains_strict(p) && !self.holes.iter().any(|h| h.contains_strict(p))
    }

    /// Distance from `p` to the nearest boundary edge.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.boundary_edges()
            .map(|e| e.dist_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// True iff the whole segment lies in the closed free space and its
    /// distance to every boundary is at least `clearance - 1e-9`.
    ///
    /// Grazing contact (touching a vertex or sliding along an edge) counts
    /// as free at zero clearance.
    pub fn contains_segment(&self, s: Segment, clearance: f64) -> bool {
        if !self.contains_point(s.a) || !self.contains_point(s.b) {
            return false;
        }
        if s.length() > EPS {
            // Split the segment at every boundary contact and require each
            // piece's midpoint to stay in the closed region.
            let mut ts = vec![0.0, 1.0];
            for e in self.boundary_edges() {
                crossing_params(s, e, &mut ts);
            }
            ts.sort_by(f64::total_cmp);
            ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
            for w in ts.windows(2) {
                let mid = s.eval((w[0] + w[1]) / 2.0);
                if !self.contains_point(mid) {
                    return false;
                }
            }
        }
        if clearance > EPS {
            let min_dist = self
                .boundary_edges()
                .map(|e| e.dist_to_segment(s))
                .fold(f64::INFINITY, f64::min);
            if min_dist < clearance - 1e-9 {
                return false;
            }
        }
        true
    }

    fn validate(&self) -> Result<()> {
        let outer_edges: Vec<Segment> = self.outer.edges().collect();
        for (hi, hole) in self.holes.iter().enumerate() {
            for &v in hole.vertices() {
                if !self.outer.contains_strict(v) || self.outer.on_boundary(v, EPS) {
                    return Err(Error::InvalidPolygon(format!(
                        "hole {hi} is not strictly inside the outer ring"
                    )));
                }
            }
            for he in hole.edges() {
                if outer_edges.iter().any(|&oe| segments_intersect(he, oe)) {
                    return Err(Error::InvalidPolygon(format!(
                        "hole {hi} touches the outer boundary"
                    )));
                }
            }
        }
        for i in 0..self.holes.len() {
            for j in (i + 1)..self.holes.len() {
                let (a, b) = (&self.holes[i], &self.holes[j]);
                let crossing = a
                    .edges()
                    .any(|ea| b.edges().any(|eb| segments_intersect(ea, eb)));
                let nested = a.vertices().iter().any(|&v| b.contains_strict(v))
                    || b.vertices().iter().any(|&v| a.contains_strict(v));
                if crossing || nested {
                    return Err(Error::InvalidPolygon(format!(
                        "holes {i} and {j} are not disjoint"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn coerce(ring: Ring, winding: Winding) -> Ring {
    if ring.winding() == winding {
        ring
    } else {
        ring.reversed()
    }
}
