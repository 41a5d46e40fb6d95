//! Reduced visibility graph over the free space and Euclidean shortest-path
//! queries between arbitrary free points.
//!
//! Graph nodes are the non-convex vertices of the outer ring plus the convex
//! vertices of hole rings; edges join mutually visible node pairs. Queries
//! connect their endpoints on the fly and run A* with the straight-line
//! heuristic. Grazing contact with the boundary counts as free; wall
//! clearance is handled upstream by the inward offset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{orientation, Orientation, Point, PolygonWithHoles, Segment, Winding};

#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    nodes: Vec<Point>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn adjacency(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// An ordered waypoint list with its Euclidean length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub waypoints: Vec<Point>,
    pub length: f64,
}

impl Polyline {
    /// Consecutive duplicate points are dropped.
    pub fn new(waypoints: Vec<Point>) -> Polyline {
        let mut pts: Vec<Point> = Vec::with_capacity(waypoints.len());
        for p in waypoints {
            if pts.last().is_none_or(|last| !last.approx_eq(p, 1e-12)) {
                pts.push(p);
            }
        }
        assert!(!pts.is_empty(), "polyline needs at least one waypoint");
        let length = pts.windows(2).map(|w| w[0].dist(w[1])).sum();
        Polyline { waypoints: pts, length }
    }

    pub fn single(p: Point) -> Polyline {
        Polyline { waypoints: vec![p], length: 0.0 }
    }

    pub fn start(&self) -> Point {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point {
        *self.waypoints.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.waypoints.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn reversed(&self) -> Polyline {
        let mut w = self.waypoints.clone();
        w.reverse();
        Polyline { waypoints: w, length: self.length }
    }
}

/// Builds the reduced visibility graph: nodes are free-space reflex corners
/// (non-convex outer vertices, convex hole vertices), ordered top-to-bottom
/// then left-to-right; edges join every mutually visible pair.
pub fn build_graph(pwh: &PolygonWithHoles) -> VisibilityGraph {
    let mut nodes: Vec<Point> = Vec::new();
    for ring in pwh.rings() {
        debug_assert!(matches!(
            (ring.winding(), pwh.outer().winding()),
            (Winding::Ccw, Winding::Ccw) | (Winding::Cw, Winding::Ccw)
        ));
        for (prev, v, next) in ring.corners() {
            // In a CCW outer ring a clockwise corner is reflex; in a CW hole
            // ring a clockwise corner is convex. Both wrap free space.
            if orientation(prev, v, next) == Orientation::Cw {
                nodes.push(v);
            }
        }
    }
    nodes.sort_by(|a, b| b.y.total_cmp(&a.y).then(a.x.total_cmp(&b.x)));

    let mut adjacency = vec![Vec::new(); nodes.len()];
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let seg = Segment::new(nodes[i], nodes[j]);
            if pwh.contains_segment(seg, 0.0) {
                let len = seg.length();
                adjacency[i].push((j, len));
                adjacency[j].push((i, len));
            }
        }
    }
    VisibilityGraph { nodes, adjacency }
}

/// Indices of graph nodes visible from `p`.
pub fn visible_nodes(
    graph: &VisibilityGraph,
    pwh: &PolygonWithHoles,
    p: Point,
) -> Result<Vec<usize>> {
    if !pwh.contains_point(p) {
        return Err(Error::OutsideFreeSpace { x: p.x, y: p.y });
    }
    Ok(graph
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, &n)| pwh.contains_segment(Segment::new(p, n), 0.0))
        .map(|(i, _)| i)
        .collect())
}

/// Search effort counters for the heuristic-admissibility property.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    pub expanded: usize,
}

/// Globally shortest Euclidean path between free points.
pub fn shortest_path(
    graph: &VisibilityGraph,
    pwh: &PolygonWithHoles,
    start: Point,
    goal: Point,
) -> Result<Polyline> {
    let start_vis = visible_nodes(graph, pwh, start)?;
    let goal_vis = visible_nodes(graph, pwh, goal)?;
    route(graph, pwh, start, &start_vis, goal, &goal_vis, true).map(|(p, _)| p)
}

/// As [`shortest_path`] but with precomputed endpoint visibility sets and a
/// switch between the A* heuristic and plain Dijkstra, reporting expansions.
#[allow(clippy::too_many_arguments)]
pub fn route(
    graph: &VisibilityGraph,
    pwh: &PolygonWithHoles,
    start: Point,
    start_vis: &[usize],
    goal: Point,
    goal_vis: &[usize],
    heuristic: bool,
) -> Result<(Polyline, SearchStats)> {
    let mut stats = SearchStats::default();
    if start.approx_eq(goal, 1e-12) {
        return Ok((Polyline::single(start), stats));
    }
    if pwh.contains_segment(Segment::new(start, goal), 0.0) {
        return Ok((Polyline::new(vec![start, goal]), stats));
    }

    // Virtual indices: graph nodes, then start, then goal.
    let n = graph.nodes.len();
    let (si, gi) = (n, n + 1);
    let pos = |i: usize| -> Point {
        if i == si {
            start
        } else if i == gi {
            goal
        } else {
            graph.nodes[i]
        }
    };
    let h = |i: usize| -> f64 {
        if heuristic {
            pos(i).dist(goal)
        } else {
            0.0
        }
    };
    let goal_visible = {
        let mut flags = vec![false; n];
        for &v in goal_vis {
            flags[v] = true;
        }
        flags
    };

    let mut dist = vec![f64::INFINITY; n + 2];
    let mut parent = vec![usize::MAX; n + 2];
    let mut settled = vec![false; n + 2];
    // Heap keyed by (f, node index): the index tie-break keeps equal-cost
    // routes deterministic in reading order.
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<(HeapKey, usize)>> =
        std::collections::BinaryHeap::new();
    dist[si] = 0.0;
    heap.push(std::cmp::Reverse((HeapKey(h(si)), si)));

    while let Some(std::cmp::Reverse((_, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        stats.expanded += 1;
        if u == gi {
            let mut seq = vec![gi];
            let mut cur = gi;
            while cur != si {
                cur = parent[cur];
                seq.push(cur);
            }
            seq.reverse();
            let pts = seq.into_iter().map(pos).collect();
            return Ok((Polyline::new(pts), stats));
        }

        let relax = |v: usize, w: f64, dist: &mut Vec<f64>, parent: &mut Vec<usize>,
                         heap: &mut std::collections::BinaryHeap<std::cmp::Reverse<(HeapKey, usize)>>| {
            let nd = dist[u] + w;
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = u;
                heap.push(std::cmp::Reverse((HeapKey(nd + h(v)), v)));
            }
        };

        if u == si {
            for &v in start_vis {
                let w = start.dist(graph.nodes[v]);
                relax(v, w, &mut dist, &mut parent, &mut heap);
            }
        } else {
            for &(v, w) in &graph.adjacency[u] {
                relax(v, w, &mut dist, &mut parent, &mut heap);
            }
            if goal_visible[u] {
                let w = graph.nodes[u].dist(goal);
                relax(gi, w, &mut dist, &mut parent, &mut heap);
            }
        }
    }

    Err(Error::NoPath {
        x0: start.x,
        y0: start.y,
        x1: goal.x,
        y1: goal.y,
    })
}

/// Total-ordered f64 wrapper for heap keys (values are never NaN).
#[derive(Clone, Copy, Debug, PartialEq)]
struct HeapKey(f64);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Immutable routing context: the free space plus its visibility graph.
///
/// Shared read-only across threads; concurrent queries are lock-free.
#[derive(Clone, Debug)]
pub struct Router {
    pwh: PolygonWithHoles,
    graph: VisibilityGraph,
}

impl Router {
    pub fn new(pwh: PolygonWithHoles) -> Router {
        let graph = build_graph(&pwh);
        Router { pwh, graph }
    }

    pub fn pwh(&self) -> &PolygonWithHoles {
        &self.pwh
    }

    pub fn graph(&self) -> &VisibilityGraph {
        &self.graph
    }

    pub fn vis_set(&self, p: Point) -> Result<Vec<usize>> {
        visible_nodes(&self.graph, &self.pwh, p)
    }

    pub fn route(&self, a: Point, b: Point) -> Result<Polyline> {
        shortest_path(&self.graph, &self.pwh, a, b)
    }

    pub fn route_with_sets(
        &self,
        a: Point,
        a_vis: &[usize],
        b: Point,
        b_vis: &[usize],
    ) -> Result<Polyline> {
        route(&self.graph, &self.pwh, a, a_vis, b, b_vis, true).map(|(p, _)| p)
    }
}
