//! Boustrophedon sweep patterns inside monotone cells.
//!
//! A sweep pattern alternates straight chords (perpendicular to the cell's
//! monotone axis) with transition subpaths routed through the visibility
//! graph. Per sweepable direction the chord sequence admits four
//! permutations: the first chord can be traversed from either side and the
//! stack can be walked bottom-up or top-down.

use serde::{Deserialize, Serialize};

use crate::decomposition::Cell;
use crate::error::{Error, Result};
use crate::geom::{dedup_directions, is_monotone, DirectionAngle, Point, Segment, ANGLE_EPS, EPS};
use crate::visibility::{Polyline, Router};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentTag {
    Sweep,
    Transition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    /// First chord traversed left to right (seen along the sweep direction).
    Ccw,
    /// First chord traversed right to left.
    Cw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOrder {
    BottomUp,
    TopDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternVariant {
    pub turn: Turn,
    pub order: SweepOrder,
}

/// Variant enumeration order; the `(Ccw, BottomUp)` pattern comes first so
/// it survives deduplication in degenerate cells.
pub const VARIANTS: [PatternVariant; 4] = [
    PatternVariant { turn: Turn::Ccw, order: SweepOrder::BottomUp },
    PatternVariant { turn: Turn::Cw, order: SweepOrder::BottomUp },
    PatternVariant { turn: Turn::Ccw, order: SweepOrder::TopDown },
    PatternVariant { turn: Turn::Cw, order: SweepOrder::TopDown },
];

/// An ordered waypoint list covering one cell; an E-GTSP node payload.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepPattern {
    pub cell_id: usize,
    pub waypoints: Vec<Point>,
    /// One tag per waypoint pair.
    pub tags: Vec<SegmentTag>,
    pub sweep_direction: DirectionAngle,
    pub variant: PatternVariant,
    pub start: Point,
    pub goal: Point,
}

impl SweepPattern {
    pub fn polyline(&self) -> Polyline {
        Polyline::new(self.waypoints.clone())
    }

    pub fn segments(&self) -> impl Iterator<Item = (Segment, SegmentTag)> + '_ {
        self.waypoints
            .windows(2)
            .zip(self.tags.iter())
            .map(|(w, &t)| (Segment::new(w[0], w[1]), t))
    }

    /// The same geometry walked backwards: still a valid pattern of the cell
    /// with start and goal swapped.
    pub fn reversed(&self) -> SweepPattern {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        let mut tags = self.tags.clone();
        tags.reverse();
        SweepPattern {
            cell_id: self.cell_id,
            waypoints,
            tags,
            sweep_direction: self.sweep_direction,
            variant: PatternVariant {
                turn: match self.variant.turn {
                    Turn::Ccw => Turn::Cw,
                    Turn::Cw => Turn::Ccw,
                },
                order: match self.variant.order {
                    SweepOrder::BottomUp => SweepOrder::TopDown,
                    SweepOrder::TopDown => SweepOrder::BottomUp,
                },
            },
            start: self.goal,
            goal: self.start,
        }
    }
}

/// Sweep directions usable for this cell: candidate directions (the cell's
/// own edge directions plus any caller-supplied extras) in which the cell is
/// monotone perpendicular to the sweep. The perpendicular of the cell's
/// monotone axis is always included.
pub fn sweepable_directions(cell: &Cell, extra_dirs: &[DirectionAngle]) -> Vec<DirectionAngle> {
    let mut cands: Vec<DirectionAngle> = cell
        .ring
        .edges()
        .map(|e| DirectionAngle::of_segment(e.a, e.b))
        .collect();
    cands.extend_from_slice(extra_dirs);
    cands.push(cell.monotone_axis.perpendicular());
    dedup_directions(cands, ANGLE_EPS)
        .into_iter()
        .filter(|d| is_monotone(&cell.ring, d.perpendicular()))
        .collect()
}

/// Chord stack for sweeping `cell` along `dir`: the full intersection of the
/// cell with equally spaced lines parallel to `dir`, bottom-up, plus a final
/// chord snapped to the top when the spacing leaves a remainder. Cells
/// thinner than the sweep distance get a single centered chord.
pub fn straight_segments(
    cell: &Cell,
    dir: DirectionAngle,
    sweep_distance: f64,
) -> Result<Vec<Segment>> {
    Ok(chords(cell, dir, sweep_distance)?
        .into_iter()
        .map(|(l, r)| Segment::new(l, r))
        .collect())
}

/// World-space chords ordered bottom-up; each pair is (left, right) as seen
/// in the rotated frame where `dir` is the +x axis.
fn chords(cell: &Cell, dir: DirectionAngle, sweep_distance: f64) -> Result<Vec<(Point, Point)>> {
    if !(sweep_distance > 0.0) || !sweep_distance.is_finite() {
        return Err(Error::InvalidParameter("sweep_distance must be positive".into()));
    }
    if !is_monotone(&cell.ring, dir.perpendicular()) {
        return Err(Error::InvalidParameter(format!(
            "cell {} is not monotone perpendicular to the sweep direction",
            cell.id
        )));
    }

    let theta = dir.radians();
    let verts: Vec<Point> = cell.ring.vertices().iter().map(|p| p.rotated(-theta)).collect();
    let y_min = verts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y_max = verts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);

    let mut levels = Vec::new();
    if y_max - y_min < sweep_distance - 1e-12 {
        levels.push((y_min + y_max) / 2.0);
    } else {
        let mut k = 0usize;
        loop {
            let y = y_min + k as f64 * sweep_distance;
            if y > y_max + EPS {
                break;
            }
            levels.push(y);
            k += 1;
        }
        if y_max - levels[levels.len() - 1] > EPS {
            levels.push(y_max);
        }
    }

    let n = verts.len();
    let mut out = Vec::with_capacity(levels.len());
    for y in levels {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let (da, db) = (a.y - y, b.y - y);
            if da.abs() <= EPS {
                lo = lo.min(a.x);
                hi = hi.max(a.x);
            }
            if db.abs() <= EPS {
                lo = lo.min(b.x);
                hi = hi.max(b.x);
            }
            if da.abs() > EPS && db.abs() > EPS && da * db < 0.0 {
                let x = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        debug_assert!(lo <= hi, "level {y} misses the cell");
        out.push((Point::new(lo, y).rotated(theta), Point::new(hi, y).rotated(theta)));
    }
    Ok(out)
}

/// The four chord-stack permutations for one sweepable direction, with
/// consecutive chord endpoints joined by visibility-graph shortest paths.
/// Duplicates arising in degenerate single-chord cells are removed.
pub fn permutations(
    cell: &Cell,
    dir: DirectionAngle,
    router: &Router,
    sweep_distance: f64,
) -> Result<Vec<SweepPattern>> {
    let chord_stack = chords(cell, dir, sweep_distance)?;
    let n = chord_stack.len();
    let mut patterns: Vec<SweepPattern> = Vec::with_capacity(4);

    for variant in VARIANTS {
        let order: Vec<usize> = match variant.order {
            SweepOrder::BottomUp => (0..n).collect(),
            SweepOrder::TopDown => (0..n).rev().collect(),
        };

        let mut waypoints: Vec<Point> = Vec::new();
        let mut tags: Vec<SegmentTag> = Vec::new();
        let push = |p: Point, tag: SegmentTag, waypoints: &mut Vec<Point>, tags: &mut Vec<SegmentTag>| {
            if waypoints.last().is_none_or(|last| !last.approx_eq(p, EPS)) {
                if !waypoints.is_empty() {
                    tags.push(tag);
                }
                waypoints.push(p);
            }
        };

        for (pos, &ci) in order.iter().enumerate() {
            let (l, r) = chord_stack[ci];
            let start_left = match variant.turn {
                Turn::Ccw => pos % 2 == 0,
                Turn::Cw => pos % 2 == 1,
            };
            let (entry, exit) = if start_left { (l, r) } else { (r, l) };
            if pos == 0 {
                waypoints.push(entry);
            } else {
                let from = *waypoints.last().unwrap();
                let transition = router.route(from, entry)?;
                for &w in &transition.waypoints {
                    push(w, SegmentTag::Transition, &mut waypoints, &mut tags);
                }
            }
            push(exit, SegmentTag::Sweep, &mut waypoints, &mut tags);
        }

        let duplicate = patterns.iter().any(|p| {
            p.waypoints.len() == waypoints.len()
                && p.waypoints
                    .iter()
                    .zip(&waypoints)
                    .all(|(a, b)| a.approx_eq(*b, EPS))
        });
        if duplicate {
            continue;
        }
        patterns.push(SweepPattern {
            cell_id: cell.id,
            start: waypoints[0],
            goal: *waypoints.last().unwrap(),
            waypoints,
            tags,
            sweep_direction: dir,
            variant,
        });
    }
    Ok(patterns)
}

#[derive(Clone, Copy, Debug)]
pub struct PatternConfig<'a> {
    pub router: &'a Router,
    pub sweep_distance: f64,
}

/// Union of [`permutations`] over every sweepable direction of the cell.
pub fn all_patterns(cell: &Cell, cfg: &PatternConfig) -> Result<Vec<SweepPattern>> {
    let mut out: Vec<SweepPattern> = Vec::new();
    for dir in sweepable_directions(cell, &[]) {
        for pat in permutations(cell, dir, cfg.router, cfg.sweep_distance)? {
            let duplicate = out.iter().any(|p| {
                p.waypoints.len() == pat.waypoints.len()
                    && p.waypoints
                        .iter()
                        .zip(&pat.waypoints)
                        .all(|(a, b)| a.approx_eq(*b, EPS))
            });
            if !duplicate {
                out.push(pat);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoSweepableDirection(cell.id));
    }
    Ok(out)
}
