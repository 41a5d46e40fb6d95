//! E-GTSP formulation over sweep patterns.
//!
//! Every sweep pattern of a cell becomes a node; each cell is a cluster,
//! plus singleton start and goal clusters. Arcs join nodes of different
//! clusters through visibility-graph shortest paths, with cost
//! `c(i, j) = transition(i -> j) + intrinsic(j)`; the matrix is asymmetric.
//! The start node has only outgoing arcs, the goal only incoming, and there
//! is no direct start-to-goal arc (the tour must cover every cell anyway).

mod exact;
mod memetic;
pub mod solvers;

pub use exact::ExactSolver;
pub use memetic::{MemeticParams, MemeticSolver};
pub use solvers::{solve_exact, solve_memetic, GtspSolver, SolverKind, SolverOpts};

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostModel;
use crate::decomposition::Cell;
use crate::error::Result;
use crate::geom::{Point, PolygonWithHoles};
use crate::sweep::{self, PatternConfig, SweepPattern};
use crate::visibility::{Polyline, Router};

#[derive(Clone, Debug)]
pub enum NodePayload {
    Sweep(SweepPattern),
    Terminal(Point),
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub cluster: usize,
    pub payload: NodePayload,
    pub entry: Point,
    pub exit: Point,
    /// Cost of executing the node's pattern (zero for terminals).
    pub intrinsic_cost: f64,
}

/// Per-node endpoint visibility sets plus the shared router; retained so
/// pruning can evaluate detours without rebuilding anything.
#[derive(Clone)]
struct GeoCtx {
    router: Arc<Router>,
    entry_vis: Vec<Vec<usize>>,
    exit_vis: Vec<Vec<usize>>,
}

/// Nodes and clusters before arc construction.
pub struct NodeSet {
    nodes: Vec<Node>,
    clusters: Vec<Vec<usize>>,
    start: usize,
    goal: usize,
    ctx: GeoCtx,
}

impl NodeSet {
    /// Creates nodes for every pattern (clusters follow the cell order),
    /// appends the start and goal terminals, and precomputes endpoint
    /// visibility sets.
    pub fn assemble(
        router: Arc<Router>,
        patterns_per_cell: &[Vec<SweepPattern>],
        start: Point,
        goal: Point,
        cost: &dyn CostModel,
    ) -> Result<NodeSet> {
        let mut nodes = Vec::new();
        let mut clusters = Vec::new();
        for patterns in patterns_per_cell {
            let mut member_ids = Vec::with_capacity(patterns.len());
            for pat in patterns {
                member_ids.push(nodes.len());
                nodes.push(Node {
                    id: nodes.len(),
                    cluster: clusters.len(),
                    payload: NodePayload::Sweep(pat.clone()),
                    entry: pat.start,
                    exit: pat.goal,
                    intrinsic_cost: cost.polyline_cost(&pat.polyline()),
                });
            }
            clusters.push(member_ids);
        }
        let start_id = nodes.len();
        nodes.push(Node {
            id: start_id,
            cluster: clusters.len(),
            payload: NodePayload::Terminal(start),
            entry: start,
            exit: start,
            intrinsic_cost: 0.0,
        });
        clusters.push(vec![start_id]);
        let goal_id = nodes.len();
        nodes.push(Node {
            id: goal_id,
            cluster: clusters.len(),
            payload: NodePayload::Terminal(goal),
            entry: goal,
            exit: goal,
            intrinsic_cost: 0.0,
        });
        clusters.push(vec![goal_id]);

        let sets: Vec<(Vec<usize>, Vec<usize>)> = nodes
            .par_iter()
            .map(|n| {
                let entry = router.vis_set(n.entry)?;
                let exit = if n.exit.approx_eq(n.entry, 1e-12) {
                    entry.clone()
                } else {
                    router.vis_set(n.exit)?
                };
                Ok((entry, exit))
            })
            .collect::<Result<_>>()?;
        let (entry_vis, exit_vis) = sets.into_iter().unzip();

        Ok(NodeSet {
            nodes,
            clusters,
            start: start_id,
            goal: goal_id,
            ctx: GeoCtx { router, entry_vis, exit_vis },
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Drops dominated nodes cluster by cluster (see [`prune_dominated`]).
    pub fn prune(self, cost: &dyn CostModel) -> NodeSet {
        let keep = surviving_nodes(&self.nodes, &self.clusters, &self.ctx, cost);
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut entry_vis = Vec::new();
        let mut exit_vis = Vec::new();
        for (old, mut node) in self.nodes.into_iter().enumerate() {
            if !keep[old] {
                continue;
            }
            remap[old] = nodes.len();
            node.id = nodes.len();
            nodes.push(node);
            entry_vis.push(self.ctx.entry_vis[old].clone());
            exit_vis.push(self.ctx.exit_vis[old].clone());
        }
        let clusters = self
            .clusters
            .iter()
            .map(|members| members.iter().filter(|&&m| keep[m]).map(|&m| remap[m]).collect())
            .collect();
        NodeSet {
            start: remap[self.start],
            goal: remap[self.goal],
            nodes,
            clusters,
            ctx: GeoCtx { router: self.ctx.router, entry_vis, exit_vis },
        }
    }

    /// Builds all cross-cluster arcs (Eq. 2 costs) in parallel.
    pub fn connect(self, cost: &dyn CostModel) -> Result<AdjacencyGraph> {
        let n = self.nodes.len();
        let rows: Vec<(Vec<f64>, Vec<Option<Polyline>>)> = (0..n)
            .into_par_iter()
            .map(|from| {
                let mut costs = vec![f64::INFINITY; n];
                let mut paths: Vec<Option<Polyline>> = vec![None; n];
                for to in 0..n {
                    if !arc_allowed(&self.nodes, self.start, self.goal, from, to) {
                        continue;
                    }
                    let path = self.ctx.router.route_with_sets(
                        self.nodes[from].exit,
                        &self.ctx.exit_vis[from],
                        self.nodes[to].entry,
                        &self.ctx.entry_vis[to],
                    )?;
                    costs[to] = cost.polyline_cost(&path) + self.nodes[to].intrinsic_cost;
                    paths[to] = Some(path);
                }
                Ok((costs, paths))
            })
            .collect::<Result<_>>()?;

        let mut cost_mat = Vec::with_capacity(n * n);
        let mut path_mat = Vec::with_capacity(n * n);
        for (costs, paths) in rows {
            cost_mat.extend(costs);
            path_mat.extend(paths);
        }
        Ok(AdjacencyGraph {
            nodes: self.nodes,
            clusters: self.clusters,
            start: self.start,
            goal: self.goal,
            cost: cost_mat,
            paths: path_mat,
            ctx: Some(self.ctx),
        })
    }
}

fn arc_allowed(nodes: &[Node], start: usize, goal: usize, from: usize, to: usize) -> bool {
    from != to
        && nodes[from].cluster != nodes[to].cluster
        && from != goal
        && to != start
        && !(from == start && to == goal)
}

/// Detour-dominance per §4.1-style pruning: node `i` dies when some sibling
/// `j` satisfies `path(entry_i, entry_j) + intrinsic_j + path(exit_j,
/// exit_i) <= intrinsic_i`. Iteration skips already-pruned dominators, so at
/// least one node per cluster always survives.
fn surviving_nodes(
    nodes: &[Node],
    clusters: &[Vec<usize>],
    ctx: &GeoCtx,
    cost: &dyn CostModel,
) -> Vec<bool> {
    let mut keep = vec![true; nodes.len()];
    for members in clusters {
        if members.len() < 2 {
            continue;
        }
        for &i in members {
            for &j in members {
                if i == j || !keep[j] {
                    continue;
                }
                let to_j = ctx
                    .router
                    .route_with_sets(
                        nodes[i].entry,
                        &ctx.entry_vis[i],
                        nodes[j].entry,
                        &ctx.entry_vis[j],
                    )
                    .expect("free space is connected");
                let back = ctx
                    .router
                    .route_with_sets(
                        nodes[j].exit,
                        &ctx.exit_vis[j],
                        nodes[i].exit,
                        &ctx.exit_vis[i],
                    )
                    .expect("free space is connected");
                let detour = cost.polyline_cost(&to_j)
                    + nodes[j].intrinsic_cost
                    + cost.polyline_cost(&back);
                if detour <= nodes[i].intrinsic_cost {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    keep
}

/// The E-GTSP instance: clusters of nodes plus an asymmetric arc-cost matrix
/// with stored transition polylines.
#[derive(Clone)]
pub struct AdjacencyGraph {
    nodes: Vec<Node>,
    clusters: Vec<Vec<usize>>,
    start: usize,
    goal: usize,
    cost: Vec<f64>,
    paths: Vec<Option<Polyline>>,
    ctx: Option<GeoCtx>,
}

#[derive(Clone, Copy)]
pub struct GraphConfig<'a> {
    pub start: Point,
    pub goal: Point,
    pub sweep_distance: f64,
    pub cost: &'a dyn CostModel,
}

/// Algorithm-1 style construction: per-cell sweep patterns become clustered
/// nodes with precomputed visibility sets, then all cross-cluster arcs are
/// routed. No pruning is applied here.
pub fn build_graph(
    pwh: &PolygonWithHoles,
    cells: &[Cell],
    cfg: &GraphConfig,
) -> Result<AdjacencyGraph> {
    let router = Arc::new(Router::new(pwh.clone()));
    let pattern_cfg = PatternConfig { router: &router, sweep_distance: cfg.sweep_distance };
    let patterns = cells
        .iter()
        .map(|cell| sweep::all_patterns(cell, &pattern_cfg))
        .collect::<Result<Vec<_>>>()?;
    NodeSet::assemble(router, &patterns, cfg.start, cfg.goal, cfg.cost)?.connect(cfg.cost)
}

/// Removes dominated nodes from a built graph. Arc costs are pairwise
/// independent, so the surviving arcs are copied over unchanged. Graphs
/// without geometry (synthetic instances) are returned as-is: no detour
/// information exists to justify pruning.
pub fn prune_dominated(g: &AdjacencyGraph, cost: &dyn CostModel) -> AdjacencyGraph {
    let Some(ctx) = &g.ctx else {
        return g.clone();
    };
    let keep = surviving_nodes(&g.nodes, &g.clusters, ctx, cost);
    let mut remap = vec![usize::MAX; g.nodes.len()];
    let mut nodes = Vec::new();
    let mut entry_vis = Vec::new();
    let mut exit_vis = Vec::new();
    for (old, node) in g.nodes.iter().enumerate() {
        if !keep[old] {
            continue;
        }
        remap[old] = nodes.len();
        let mut node = node.clone();
        node.id = nodes.len();
        nodes.push(node);
        entry_vis.push(ctx.entry_vis[old].clone());
        exit_vis.push(ctx.exit_vis[old].clone());
    }
    let clusters: Vec<Vec<usize>> = g
        .clusters
        .iter()
        .map(|members| members.iter().filter(|&&m| keep[m]).map(|&m| remap[m]).collect())
        .collect();

    let n = nodes.len();
    let mut cost_mat = vec![f64::INFINITY; n * n];
    let mut path_mat: Vec<Option<Polyline>> = vec![None; n * n];
    for (old_from, &new_from) in remap.iter().enumerate() {
        if new_from == usize::MAX {
            continue;
        }
        for (old_to, &new_to) in remap.iter().enumerate() {
            if new_to == usize::MAX {
                continue;
            }
            let old_idx = old_from * g.nodes.len() + old_to;
            cost_mat[new_from * n + new_to] = g.cost[old_idx];
            path_mat[new_from * n + new_to] = g.paths[old_idx].clone();
        }
    }

    AdjacencyGraph {
        start: remap[g.start],
        goal: remap[g.goal],
        nodes,
        clusters,
        cost: cost_mat,
        paths: path_mat,
        ctx: Some(GeoCtx { router: ctx.router.clone(), entry_vis, exit_vis }),
    }
}

impl AdjacencyGraph {
    /// Builds an abstract instance from cluster sizes and an arc-cost
    /// function over global node indices (cell-cluster nodes first, then the
    /// start and goal terminals). Used by solver tests and benchmarks.
    pub fn synthetic(
        cluster_sizes: &[usize],
        mut arc_cost: impl FnMut(usize, usize) -> f64,
    ) -> AdjacencyGraph {
        let origin = Point::new(0.0, 0.0);
        let mut nodes = Vec::new();
        let mut clusters = Vec::new();
        for &size in cluster_sizes {
            assert!(size > 0, "empty cluster");
            let members: Vec<usize> = (0..size)
                .map(|_| {
                    let id = nodes.len();
                    nodes.push(Node {
                        id,
                        cluster: clusters.len(),
                        payload: NodePayload::Terminal(origin),
                        entry: origin,
                        exit: origin,
                        intrinsic_cost: 0.0,
                    });
                    id
                })
                .collect();
            clusters.push(members);
        }
        let start = nodes.len();
        nodes.push(Node {
            id: start,
            cluster: clusters.len(),
            payload: NodePayload::Terminal(origin),
            entry: origin,
            exit: origin,
            intrinsic_cost: 0.0,
        });
        clusters.push(vec![start]);
        let goal = nodes.len();
        nodes.push(Node {
            id: goal,
            cluster: clusters.len(),
            payload: NodePayload::Terminal(origin),
            entry: origin,
            exit: origin,
            intrinsic_cost: 0.0,
        });
        clusters.push(vec![goal]);

        let n = nodes.len();
        let mut cost = vec![f64::INFINITY; n * n];
        for from in 0..n {
            for to in 0..n {
                if arc_allowed(&nodes, start, goal, from, to) {
                    cost[from * n + to] = arc_cost(from, to);
                }
            }
        }
        AdjacencyGraph {
            nodes,
            clusters,
            start,
            goal,
            cost,
            paths: vec![None; n * n],
            ctx: None,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Clusters in id order: cell clusters, then start, then goal.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Number of cell clusters (excludes the two terminal clusters).
    pub fn cell_cluster_count(&self) -> usize {
        self.clusters.len() - 2
    }

    pub fn start_node(&self) -> usize {
        self.start
    }

    pub fn goal_node(&self) -> usize {
        self.goal
    }

    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.cost[from * self.nodes.len() + to]
    }

    pub fn transition(&self, from: usize, to: usize) -> Option<&Polyline> {
        self.paths[from * self.nodes.len() + to].as_ref()
    }

    pub fn arc_count(&self) -> usize {
        self.cost.iter().filter(|c| c.is_finite()).count()
    }

    /// Total cost along a node sequence; infinite if any arc is absent.
    pub fn sequence_cost(&self, seq: &[usize]) -> f64 {
        seq.windows(2).map(|w| self.cost(w[0], w[1])).sum()
    }

    /// True iff the sequence runs start to goal visiting exactly one node of
    /// every cell cluster.
    pub fn is_valid_sequence(&self, seq: &[usize]) -> bool {
        if seq.first() != Some(&self.start) || seq.last() != Some(&self.goal) {
            return false;
        }
        let m = self.cell_cluster_count();
        if seq.len() != m + 2 {
            return false;
        }
        let mut seen = vec![false; m];
        for &node in &seq[1..seq.len() - 1] {
            let cl = self.nodes[node].cluster;
            if cl >= m || seen[cl] {
                return false;
            }
            seen[cl] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Plain-text instance dump: header counts, cluster membership lines,
    /// then dense cost rows with absent arcs encoded as 1e18.
    pub fn write_instance(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            w,
            "egtsp nodes {} clusters {} start {} goal {}",
            self.nodes.len(),
            self.clusters.len(),
            self.start,
            self.goal
        )?;
        for (i, members) in self.clusters.iter().enumerate() {
            write!(w, "cluster {i}:")?;
            for m in members {
                write!(w, " {m}")?;
            }
            writeln!(w)?;
        }
        let n = self.nodes.len();
        for from in 0..n {
            for to in 0..n {
                if to > 0 {
                    write!(w, " ")?;
                }
                let c = self.cost(from, to);
                if c.is_finite() {
                    write!(w, "{c}")?;
                } else {
                    write!(w, "1e18")?;
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// A solved tour: start terminal, one node per cell cluster, goal terminal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Solution {
    pub sequence: Vec<usize>,
    pub total_cost: f64,
    pub solver: SolverKind,
    pub wall_time: f64,
}
