//! Robust predicates and segment intersection helpers.

use super::{Point, Segment, EPS};

/// Result of the orientation test for an ordered point triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

fn coord(p: Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

/// Sign of twice the signed area of triangle `pqr`, evaluated with
/// adaptive-precision arithmetic so the sign never flips under
/// evaluation-order changes.
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    let det = robust::orient2d(coord(p), coord(q), coord(r));
    if det > 0.0 {
        Orientation::Ccw
    } else if det < 0.0 {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

/// True if `p` lies on segment `s` (exact collinearity plus span check).
pub fn point_on_segment(p: Point, s: Segment) -> bool {
    if orientation(s.a, s.b, p) != Orientation::Collinear {
        return false;
    }
    p.x >= s.a.x.min(s.b.x) - EPS
        && p.x <= s.a.x.max(s.b.x) + EPS
        && p.y >= s.a.y.min(s.b.y) - EPS
        && p.y <= s.a.y.max(s.b.y) + EPS
}

/// Inclusive segment intersection: proper crossings, endpoint touches and
/// collinear overlaps all count.
pub fn segments_intersect(s: Segment, t: Segment) -> bool {
    let o1 = orientation(s.a, s.b, t.a);
    let o2 = orientation(s.a, s.b, t.b);
    let o3 = orientation(t.a, t.b, s.a);
    let o4 = orientation(t.a, t.b, s.b);

    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == Orientation::Collinear && point_on_segment(t.a, s))
        || (o2 == Orientation::Collinear && point_on_segment(t.b, s))
        || (o3 == Orientation::Collinear && point_on_segment(s.a, t))
        || (o4 == Orientation::Collinear && point_on_segment(s.b, t))
}

/// Parameter on `s` where the supporting lines of `s` and `t` cross, if the
/// lines are not parallel.
fn line_cross_param(s: Segment, t: Segment) -> Option<f64> {
    let rx = s.b.x - s.a.x;
    let ry = s.b.y - s.a.y;
    let qx = t.b.x - t.a.x;
    let qy = t.b.y - t.a.y;
    let denom = rx * qy - ry * qx;
    if denom == 0.0 {
        return None;
    }
    let dx = t.a.x - s.a.x;
    let dy = t.a.y - s.a.y;
    Some((dx * qy - dy * qx) / denom)
}

/// Parameters on `s` (in `[0, 1]`) where `s` meets segment `t`.
///
/// Over-collection is fine (callers midpoint-test the gaps between
/// parameters); missing a genuine contact is not.
pub fn crossing_params(s: Segment, t: Segment, out: &mut Vec<f64>) {
    if s.a.x.min(s.b.x) > t.a.x.max(t.b.x) + EPS
        || s.a.x.max(s.b.x) < t.a.x.min(t.b.x) - EPS
        || s.a.y.min(s.b.y) > t.a.y.max(t.b.y) + EPS
        || s.a.y.max(s.b.y) < t.a.y.min(t.b.y) - EPS
    {
        return;
    }

    let param_of = |p: Point| -> f64 {
        let len_sq = s.a.dist_sq(s.b);
        if len_sq == 0.0 {
            return 0.0;
        }
        (((p.x - s.a.x) * (s.b.x - s.a.x) + (p.y - s.a.y) * (s.b.y - s.a.y)) / len_sq)
            .clamp(0.0, 1.0)
    };

    let o1 = orientation(s.a, s.b, t.a);
    let o2 = orientation(s.a, s.b, t.b);
    let o3 = orientation(t.a, t.b, s.a);
    let o4 = orientation(t.a, t.b, s.b);

    if o1 == Orientation::Collinear && point_on_segment(t.a, s) {
        out.push(param_of(t.a));
    }
    if o2 == Orientation::Collinear && point_on_segment(t.b, s) {
        out.push(param_of(t.b));
    }
    if o3 == Orientation::Collinear && point_on_segment(s.a, t) {
        out.push(0.0);
    }
    if o4 == Orientation::Collinear && point_on_segment(s.b, t) {
        out.push(1.0);
    }
    if o1 != o2 && o3 != o4 {
        if let Some(tt) = line_cross_param(s, t) {
            if (-1e-12..=1.0 + 1e-12).contains(&tt) {
                out.push(tt.clamp(0.0, 1.0));
            }
        }
    }
}
