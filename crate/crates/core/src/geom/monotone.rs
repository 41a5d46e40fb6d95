use super::{DirectionAngle, Ring, EPS};

/// True iff `dir` is a monotone axis of the ring: every line perpendicular
/// to `dir` meets the region in at most one connected set.
///
/// Equivalent test: project the vertices onto `dir` and walk the ring; the
/// cyclic sequence of nonzero projection deltas must change sign exactly
/// twice (one ascending chain, one descending chain). Degenerate rings are
/// unrepresentable (`Ring` construction rejects them), so this cannot fail.
pub fn is_monotone(ring: &Ring, dir: DirectionAngle) -> bool {
    let (ux, uy) = dir.unit();
    let vs = ring.vertices();
    let n = vs.len();

    let mut signs: Vec<i8> = Vec::with_capacity(n);
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        let dt = (b.x - a.x) * ux + (b.y - a.y) * uy;
        if dt > EPS {
            signs.push(1);
        } else if dt < -EPS {
            signs.push(-1);
        }
        // Edges perpendicular to the axis do not break monotonicity.
    }
    if signs.is_empty() {
        return false;
    }

    let mut changes = 0usize;
    for i in 0..signs.len() {
        if signs[i] != signs[(i + 1) % signs.len()] {
            changes += 1;
        }
    }
    changes == 2
}
