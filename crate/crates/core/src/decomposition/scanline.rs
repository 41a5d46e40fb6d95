//! Shared scan-line engine for the cell decompositions.
//!
//! The polygon arrives rotated so the scan direction is the +x axis. Slabs
//! between consecutive event abscissae carry an even stack of active edges;
//! consecutive pairs bound free-space intervals. Intervals are tracked across
//! slab boundaries: 1:1 overlaps continue an open cell, anything else closes
//! and opens cells. The cut policy distinguishes the boustrophedon
//! decomposition (cut only where connectivity changes) from the trapezoidal
//! one (also cut wherever an event vertex touches the interval).

use crate::error::{Error, Result};
use crate::geom::{Point, PolygonWithHoles, Ring, EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CutPolicy {
    /// Cut only at connectivity changes (boustrophedon).
    CriticalOnly,
    /// Additionally cut every interval touched by an event vertex (trapezoidal).
    EveryVertex,
}

/// An x-monotone cell as floor and ceiling chains, both left to right.
#[derive(Clone, Debug)]
pub(crate) struct ChainCell {
    pub floor: Vec<Point>,
    pub ceil: Vec<Point>,
}

impl ChainCell {
    pub fn first_x(&self) -> f64 {
        self.floor[0].x
    }

    pub fn last_x(&self) -> f64 {
        self.floor[self.floor.len() - 1].x
    }

    pub fn extent_x(&self) -> f64 {
        self.last_x() - self.first_x()
    }

    fn boundary(&self) -> Vec<Point> {
        let mut pts = self.floor.clone();
        pts.extend(self.ceil.iter().rev());
        pts
    }

    pub fn area(&self) -> f64 {
        let pts = self.boundary();
        let n = pts.len();
        let mut acc = 0.0;
        for i in 0..n {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            acc += p.x * q.y - q.x * p.y;
        }
        acc.abs() / 2.0
    }

    pub fn into_ring(self) -> Result<Ring> {
        Ring::new(self.boundary())
    }
}

struct OpenCell {
    floor: Vec<Point>,
    ceil: Vec<Point>,
    floor_edge: usize,
    ceil_edge: usize,
}

#[derive(Clone, Copy)]
struct Span {
    lo: f64,
    hi: f64,
}

impl Span {
    fn overlaps(self, other: Span) -> bool {
        self.hi.min(other.hi) - self.lo.max(other.lo) > EPS
    }
}

pub(crate) fn scan_decompose(pwh: &PolygonWithHoles, policy: CutPolicy) -> Result<Vec<ChainCell>> {
    let edges: Vec<(Point, Point)> = pwh.boundary_edges().map(|s| (s.a, s.b)).collect();

    // Event abscissae, grouped within EPS so vertical edges and coincident
    // vertices are handled in one batch. Event vertex ordinates are kept per
    // group for the trapezoidal cut test.
    let mut vxs: Vec<Point> = pwh.rings().flat_map(|r| r.vertices().iter().copied()).collect();
    vxs.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut xs: Vec<f64> = Vec::new();
    let mut event_ys: Vec<Vec<f64>> = Vec::new();
    for v in vxs {
        if xs.last().is_some_and(|&x| v.x - x <= EPS) {
            event_ys.last_mut().unwrap().push(v.y);
        } else {
            xs.push(v.x);
            event_ys.push(vec![v.y]);
        }
    }
    if xs.len() < 2 {
        return Err(Error::InvalidPolygon("region has no scan extent".into()));
    }

    let eval = |edge: usize, x: f64| -> f64 {
        let (a, b) = edges[edge];
        let (a, b) = if a.x <= b.x { (a, b) } else { (b, a) };
        if (x - a.x).abs() <= EPS {
            a.y
        } else if (b.x - x).abs() <= EPS {
            b.y
        } else {
            a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y)
        }
    };

    let mut open: Vec<OpenCell> = Vec::new();
    let mut prev_pairs: Vec<(usize, usize)> = Vec::new(); // (floor edge, ceil edge) per open cell
    let mut done: Vec<ChainCell> = Vec::new();

    let close = |cell: OpenCell, x: f64, span: Span, done: &mut Vec<ChainCell>| {
        let mut floor = cell.floor;
        let mut ceil = cell.ceil;
        push_unique(&mut floor, Point::new(x, span.lo));
        push_unique(&mut ceil, Point::new(x, span.hi));
        done.push(ChainCell { floor, ceil });
    };

    for si in 0..xs.len() {
        let x_b = xs[si];
        // Active edge stack for the slab to the right of this event.
        let next_pairs: Vec<(usize, usize)> = if si + 1 < xs.len() {
            let mid = (x_b + xs[si + 1]) / 2.0;
            let mut active: Vec<(usize, f64)> = edges
                .iter()
                .enumerate()
                .filter(|(_, (a, b))| a.x.min(b.x) < mid && a.x.max(b.x) > mid)
                .map(|(i, _)| (i, eval(i, mid)))
                .collect();
            active.sort_by(|l, r| l.1.total_cmp(&r.1));
            if active.len() % 2 != 0 {
                return Err(Error::InvalidPolygon(format!(
                    "odd boundary stack at scan offset {mid}"
                )));
            }
            active
                .chunks_exact(2)
                .map(|c| (c[0].0, c[1].0))
                .collect()
        } else {
            Vec::new()
        };

        let prev_spans: Vec<Span> = prev_pairs
            .iter()
            .map(|&(f, c)| Span { lo: eval(f, x_b), hi: eval(c, x_b) })
            .collect();
        let next_spans: Vec<Span> = next_pairs
            .iter()
            .map(|&(f, c)| Span { lo: eval(f, x_b), hi: eval(c, x_b) })
            .collect();

        // Bipartite overlap components between outgoing and incoming intervals.
        let np = prev_spans.len();
        let nn = next_spans.len();
        let mut comp_of_prev = vec![usize::MAX; np];
        let mut comp_of_next = vec![usize::MAX; nn];
        let mut components: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for i in 0..np {
            for j in 0..nn {
                if !prev_spans[i].overlaps(next_spans[j]) {
                    continue;
                }
                match (comp_of_prev[i], comp_of_next[j]) {
                    (usize::MAX, usize::MAX) => {
                        components.push((vec![i], vec![j]));
                        comp_of_prev[i] = components.len() - 1;
                        comp_of_next[j] = components.len() - 1;
                    }
                    (ci, usize::MAX) => {
                        components[ci].1.push(j);
                        comp_of_next[j] = ci;
                    }
                    (usize::MAX, cj) => {
                        components[cj].0.push(i);
                        comp_of_prev[i] = cj;
                    }
                    (ci, cj) if ci != cj => {
                        let (pv, nx) = components[cj].clone();
                        for &p in &pv {
                            comp_of_prev[p] = ci;
                        }
                        for &n in &nx {
                            comp_of_next[n] = ci;
                        }
                        components[ci].0.extend(pv);
                        components[ci].1.extend(nx);
                        components[cj] = (Vec::new(), Vec::new());
                    }
                    _ => {}
                }
            }
        }

        let mut new_open: Vec<Option<OpenCell>> = (0..nn).map(|_| None).collect();
        let mut closing: Vec<(usize, Span)> = Vec::new();

        for (prevs, nexts) in &components {
            if prevs.len() == 1 && nexts.len() == 1 {
                let (pi, ni) = (prevs[0], nexts[0]);
                let cut = match policy {
                    CutPolicy::CriticalOnly => false,
                    CutPolicy::EveryVertex => {
                        let lo = prev_spans[pi].lo.min(next_spans[ni].lo) - 10.0 * EPS;
                        let hi = prev_spans[pi].hi.max(next_spans[ni].hi) + 10.0 * EPS;
                        event_ys[si].iter().any(|&y| y >= lo && y <= hi)
                    }
                };
                if cut {
                    closing.push((pi, prev_spans[pi]));
                } else {
                    // Continuation: record junction vertices where the
                    // bounding edges change (vertical jumps keep both points).
                    let mut cell = std::mem::replace(
                        &mut open[pi],
                        OpenCell { floor: Vec::new(), ceil: Vec::new(), floor_edge: 0, ceil_edge: 0 },
                    );
                    let (nf, nc) = next_pairs[ni];
                    if cell.floor_edge != nf {
                        push_unique(&mut cell.floor, Point::new(x_b, prev_spans[pi].lo));
                        push_unique(&mut cell.floor, Point::new(x_b, next_spans[ni].lo));
                        cell.floor_edge = nf;
                    }
                    if cell.ceil_edge != nc {
                        push_unique(&mut cell.ceil, Point::new(x_b, prev_spans[pi].hi));
                        push_unique(&mut cell.ceil, Point::new(x_b, next_spans[ni].hi));
                        cell.ceil_edge = nc;
                    }
                    new_open[ni] = Some(cell);
                    continue;
                }
            } else {
                for &pi in prevs {
                    closing.push((pi, prev_spans[pi]));
                }
            }
        }
        // Unmatched outgoing intervals close too.
        for (pi, span) in prev_spans.iter().enumerate() {
            if comp_of_prev[pi] == usize::MAX {
                closing.push((pi, *span));
            }
        }

        closing.sort_by_key(|&(pi, _)| pi);
        for (pi, span) in closing {
            let cell = std::mem::replace(
                &mut open[pi],
                OpenCell { floor: Vec::new(), ceil: Vec::new(), floor_edge: 0, ceil_edge: 0 },
            );
            close(cell, x_b, span, &mut done);
        }

        open = new_open
            .into_iter()
            .enumerate()
            .map(|(ni, slot)| {
                slot.unwrap_or_else(|| {
                    let (nf, nc) = next_pairs[ni];
                    let span = next_spans[ni];
                    OpenCell {
                        floor: vec![Point::new(x_b, span.lo)],
                        ceil: vec![Point::new(x_b, span.hi)],
                        floor_edge: nf,
                        ceil_edge: nc,
                    }
                })
            })
            .collect();
        prev_pairs = next_pairs;
    }

    debug_assert!(open.is_empty() && prev_pairs.is_empty());
    Ok(done)
}

fn push_unique(chain: &mut Vec<Point>, p: Point) {
    if chain.last().is_none_or(|last| !last.approx_eq(p, EPS)) {
        chain.push(p);
    }
}

/// Merges cells below the minimum area or altitude into an adjacent cell
/// sharing the longest boundary. A sliver whose end span overlaps the
/// neighbour's span merges by chain concatenation: mismatched span ends
/// become vertical jumps, so the union stays x-monotone. Slivers with no
/// overlapping neighbour are dropped.
pub(crate) fn merge_slivers(mut cells: Vec<ChainCell>) -> Vec<ChainCell> {
    const MIN_AREA: f64 = 1e-4;
    const MIN_ALTITUDE: f64 = 1e-3;

    loop {
        let Some(idx) = cells
            .iter()
            .position(|c| c.area() < MIN_AREA || c.extent_x() < MIN_ALTITUDE)
        else {
            break;
        };
        if cells.len() == 1 {
            break; // a single tiny cell is the whole region; keep it
        }

        let chain_ends = |c: &ChainCell| {
            (
                (c.floor[0], c.ceil[0]),
                (c.floor[c.floor.len() - 1], c.ceil[c.ceil.len() - 1]),
            )
        };
        let overlap = |(af, ac): (Point, Point), (bf, bc): (Point, Point)| -> f64 {
            ac.y.min(bc.y) - af.y.max(bf.y)
        };
        let (s_left, s_right) = chain_ends(&cells[idx]);

        let mut best: Option<(usize, bool, f64)> = None; // (other, other_is_left, shared span)
        for (j, other) in cells.iter().enumerate() {
            if j == idx {
                continue;
            }
            let (o_left, o_right) = chain_ends(other);
            // `other` to the left: its right side borders the sliver's left.
            if (o_right.0.x - s_left.0.x).abs() <= EPS {
                let shared = overlap(o_right, s_left);
                if shared > EPS && best.is_none_or(|b| shared > b.2) {
                    best = Some((j, true, shared));
                }
            }
            // `other` to the right.
            if (o_left.0.x - s_right.0.x).abs() <= EPS {
                let shared = overlap(s_right, o_left);
                if shared > EPS && best.is_none_or(|b| shared > b.2) {
                    best = Some((j, false, shared));
                }
            }
        }

        match best {
            Some((j, other_is_left, _)) => {
                let sliver = cells.remove(idx);
                let j = if j > idx { j - 1 } else { j };
                let target = &mut cells[j];
                let (mut left, right) = if other_is_left {
                    (std::mem::take(&mut target.floor), sliver.floor)
                } else {
                    (sliver.floor, std::mem::take(&mut target.floor))
                };
                for p in right {
                    push_unique(&mut left, p);
                }
                target.floor = left;
                let (mut left, right) = if other_is_left {
                    (std::mem::take(&mut target.ceil), sliver.ceil)
                } else {
                    (sliver.ceil, std::mem::take(&mut target.ceil))
                };
                for p in right {
                    push_unique(&mut left, p);
                }
                target.ceil = left;
            }
            None => {
                log::warn!(
                    "dropping degenerate cell (area {:.3e}, altitude {:.3e}) with no monotone neighbour",
                    cells[idx].area(),
                    cells[idx].extent_x()
                );
                cells.remove(idx);
            }
        }
    }
    cells
}
