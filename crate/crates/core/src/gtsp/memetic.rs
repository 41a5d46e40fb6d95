//! Memetic E-GTSP solver in the Gutin–Karapetyan style: a genetic search
//! over cluster orders with local improvement. Fitness of an order is exact:
//! given the cluster sequence, the best node per cluster follows from a
//! layered shortest-path DP (cluster optimization). Variation uses order
//! crossover plus swap/shift mutation; local search runs 2-opt and or-opt
//! moves on the cluster order. Replacement is elitist and every random draw
//! comes from the caller's seed, so results are reproducible.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::solvers::{GtspSolver, SolverKind};
use super::{AdjacencyGraph, Solution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct MemeticParams {
    pub population: usize,
    pub max_generations: usize,
    /// Stop after this many generations without improvement.
    pub stagnation_limit: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Optional wall-clock cap. Off by default: interrupting mid-search at a
    /// timer tick would make results machine-dependent.
    pub time_budget: Option<Duration>,
}

impl Default for MemeticParams {
    fn default() -> Self {
        MemeticParams {
            population: 24,
            max_generations: 160,
            stagnation_limit: 25,
            crossover_rate: 0.95,
            mutation_rate: 0.35,
            time_budget: None,
        }
    }
}

pub struct MemeticSolver {
    pub seed: u64,
    pub params: MemeticParams,
}

#[derive(Clone)]
struct Individual {
    order: Vec<usize>,
    cost: f64,
}

impl GtspSolver for MemeticSolver {
    fn name(&self) -> &'static str {
        "memetic"
    }

    fn kind(&self) -> SolverKind {
        SolverKind::Memetic
    }

    fn solve(&self, g: &AdjacencyGraph) -> Result<Solution> {
        self.solve_with_history(g).map(|(s, _)| s)
    }
}

impl MemeticSolver {
    /// Runs the search and reports the best cost after every generation
    /// (elitism makes the trace non-increasing).
    pub fn solve_with_history(&self, g: &AdjacencyGraph) -> Result<(Solution, Vec<f64>)> {
        let t0 = Instant::now();
        let m = g.cell_cluster_count();
        if m == 0 {
            return Err(Error::InvalidParameter("instance has no cell clusters".into()));
        }
        let p = self.params.population.max(4);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let search = Search { g, surrogate: Surrogate::new(g) };

        let mut pop: Vec<Individual> = Vec::with_capacity(p);
        pop.push(search.evaluated(search.greedy_order()));
        while pop.len() < p {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(&mut rng);
            pop.push(search.evaluated(order));
        }
        for ind in &mut pop {
            search.local_search(ind);
        }
        sort_population(&mut pop);

        let mut history = vec![pop[0].cost];
        let mut stagnant = 0usize;
        for _gen in 0..self.params.max_generations {
            if stagnant >= self.params.stagnation_limit {
                break;
            }
            if let Some(limit) = self.params.time_budget {
                if t0.elapsed() > limit {
                    break;
                }
            }

            let mut offspring = Vec::with_capacity(p);
            for _ in 0..p {
                let a = tournament(&pop, &mut rng);
                let b = tournament(&pop, &mut rng);
                let mut order = if m >= 2 && rng.random::<f64>() < self.params.crossover_rate {
                    order_crossover(&pop[a].order, &pop[b].order, &mut rng)
                } else {
                    pop[a].order.clone()
                };
                if m >= 2 && rng.random::<f64>() < self.params.mutation_rate {
                    let i = rng.random_range(0..m);
                    let j = rng.random_range(0..m);
                    order.swap(i, j);
                }
                if m >= 2 && rng.random::<f64>() < self.params.mutation_rate {
                    let from = rng.random_range(0..m);
                    let cl = order.remove(from);
                    let to = rng.random_range(0..order.len() + 1);
                    order.insert(to, cl);
                }
                let mut ind = search.evaluated(order);
                search.local_search(&mut ind);
                offspring.push(ind);
            }

            let best_before = pop[0].cost;
            pop.extend(offspring);
            sort_population(&mut pop);
            pop.dedup_by(|a, b| a.order == b.order);
            pop.truncate(p);
            if pop[0].cost < best_before - 1e-12 {
                stagnant = 0;
            } else {
                stagnant += 1;
            }
            history.push(pop[0].cost);
        }

        let best = &pop[0];
        let (cost, sequence) = search.cluster_opt(&best.order);
        debug_assert!((cost - best.cost).abs() <= 1e-9);
        Ok((
            Solution {
                sequence,
                total_cost: cost,
                solver: SolverKind::Memetic,
                wall_time: t0.elapsed().as_secs_f64(),
            },
            history,
        ))
    }
}

fn sort_population(pop: &mut [Individual]) {
    pop.sort_by(|a, b| a.cost.total_cmp(&b.cost).then_with(|| a.order.cmp(&b.order)));
}

fn tournament(pop: &[Individual], rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.random_range(0..pop.len());
    for _ in 0..2 {
        let c = rng.random_range(0..pop.len());
        if pop[c].cost < pop[best].cost {
            best = c;
        }
    }
    best
}

/// OX order crossover: keep a random slice of `a`, fill the rest in `b`'s
/// cyclic order.
fn order_crossover(a: &[usize], b: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let m = a.len();
    let mut i = rng.random_range(0..m);
    let mut j = rng.random_range(0..m);
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    let mut child = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for k in i..=j {
        child[k] = a[k];
        used[a[k]] = true;
    }
    let mut fill = (j + 1) % m;
    for k in 0..m {
        let cand = b[(j + 1 + k) % m];
        if !used[cand] {
            child[fill] = cand;
            used[cand] = true;
            fill = (fill + 1) % m;
        }
    }
    child
}

/// Cluster-level lower-bound distances used to rank local-search moves on
/// large instances where exact re-evaluation of every candidate move would
/// dominate the runtime.
struct Surrogate {
    m: usize,
    /// (m+1) x (m+1): index m is the start terminal (row) / goal (column).
    d: Vec<f64>,
}

impl Surrogate {
    fn new(g: &AdjacencyGraph) -> Surrogate {
        let m = g.cell_cluster_count();
        let mut d = vec![f64::INFINITY; (m + 1) * (m + 1)];
        let cluster_of = |node: usize| g.nodes()[node].cluster;
        for from in 0..g.node_count() {
            for to in 0..g.node_count() {
                let c = g.cost(from, to);
                if !c.is_finite() {
                    continue;
                }
                let fc = cluster_of(from);
                let tc = cluster_of(to);
                let fi = if from == g.start_node() { m } else { fc };
                let ti = if to == g.goal_node() { m } else { tc };
                if fi > m || ti > m || (fi < m && fc >= m) || (ti < m && tc >= m) {
                    continue;
                }
                let slot = &mut d[fi * (m + 1) + ti];
                *slot = slot.min(c);
            }
        }
        Surrogate { m, d }
    }

    fn dist(&self, from: usize, to: usize) -> f64 {
        self.d[from * (self.m + 1) + to]
    }

    /// Lower-bound cost of a cluster order (start -> clusters -> goal).
    fn order_cost(&self, order: &[usize]) -> f64 {
        let mut acc = self.dist(self.m, order[0]);
        for w in order.windows(2) {
            acc += self.dist(w[0], w[1]);
        }
        acc + self.dist(*order.last().unwrap(), self.m)
    }
}

struct Search<'a> {
    g: &'a AdjacencyGraph,
    surrogate: Surrogate,
}

impl Search<'_> {
    fn evaluated(&self, order: Vec<usize>) -> Individual {
        let (cost, _) = self.cluster_opt(&order);
        Individual { order, cost }
    }

    /// Exact cluster optimization: best node choice for a fixed cluster
    /// order via a layered shortest path from start to goal.
    fn cluster_opt(&self, order: &[usize]) -> (f64, Vec<usize>) {
        let g = self.g;
        let mut layer: Vec<(usize, f64, usize)> = vec![(g.start_node(), 0.0, usize::MAX)];
        let mut layers: Vec<Vec<(usize, f64, usize)>> = Vec::with_capacity(order.len() + 1);
        for &cl in order {
            let mut next = Vec::with_capacity(g.clusters()[cl].len());
            for &cand in &g.clusters()[cl] {
                let mut best = f64::INFINITY;
                let mut from = usize::MAX;
                for (li, &(node, cost, _)) in layer.iter().enumerate() {
                    let c = g.cost(node, cand);
                    if c.is_finite() && cost + c < best {
                        best = cost + c;
                        from = li;
                    }
                }
                next.push((cand, best, from));
            }
            layers.push(std::mem::replace(&mut layer, next));
        }
        let mut best = f64::INFINITY;
        let mut from = usize::MAX;
        for (li, &(node, cost, _)) in layer.iter().enumerate() {
            let c = g.cost(node, g.goal_node());
            if c.is_finite() && cost + c < best {
                best = cost + c;
                from = li;
            }
        }
        if !best.is_finite() {
            return (f64::INFINITY, Vec::new());
        }
        layers.push(layer);

        let mut sequence = vec![g.goal_node()];
        let mut at = from;
        for layer in layers.iter().skip(1).rev() {
            let (node, _, parent) = layer[at];
            sequence.push(node);
            at = parent;
        }
        sequence.push(g.start_node());
        sequence.reverse();
        (best, sequence)
    }

    /// Greedy seed: repeatedly append the cluster with the cheapest
    /// surrogate arc from the current end.
    fn greedy_order(&self) -> Vec<usize> {
        let m = self.g.cell_cluster_count();
        let mut remaining: Vec<usize> = (0..m).collect();
        let mut order = Vec::with_capacity(m);
        let mut at = m; // start terminal in surrogate indexing
        while !remaining.is_empty() {
            let (pos, &cl) = remaining
                .iter()
                .enumerate()
                .min_by(|(_, &a), (_, &b)| {
                    self.surrogate.dist(at, a).total_cmp(&self.surrogate.dist(at, b))
                })
                .unwrap();
            order.push(cl);
            remaining.remove(pos);
            at = cl;
        }
        order
    }

    fn local_search(&self, ind: &mut Individual) {
        let m = ind.order.len();
        if m < 2 {
            return;
        }
        if m <= 12 {
            self.exact_two_opt(ind);
        } else {
            self.surrogate_descent(ind);
        }
        self.or_opt(ind);
    }

    /// First-improvement 2-opt with exact re-evaluation; affordable while
    /// the cluster count stays small.
    fn exact_two_opt(&self, ind: &mut Individual) {
        let m = ind.order.len();
        for _ in 0..4 {
            let mut improved = false;
            'scan: for i in 0..m - 1 {
                for j in i + 1..m {
                    let mut cand = ind.order.clone();
                    cand[i..=j].reverse();
                    let (cost, _) = self.cluster_opt(&cand);
                    if cost < ind.cost - 1e-12 {
                        ind.order = cand;
                        ind.cost = cost;
                        improved = true;
                        break 'scan;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    /// Best-improvement 2-opt on the surrogate distances, verified with the
    /// exact fitness before acceptance.
    fn surrogate_descent(&self, ind: &mut Individual) {
        let m = ind.order.len();
        for _ in 0..6 {
            let base = self.surrogate.order_cost(&ind.order);
            let mut best_delta = -1e-12;
            let mut best_move: Option<(usize, usize)> = None;
            for i in 0..m - 1 {
                for j in i + 1..m {
                    let mut cand = ind.order.clone();
                    cand[i..=j].reverse();
                    let delta = self.surrogate.order_cost(&cand) - base;
                    if delta < best_delta {
                        best_delta = delta;
                        best_move = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best_move else { break };
            let mut cand = ind.order.clone();
            cand[i..=j].reverse();
            let (cost, _) = self.cluster_opt(&cand);
            if cost < ind.cost - 1e-12 {
                ind.order = cand;
                ind.cost = cost;
            } else {
                break;
            }
        }
    }

    /// Or-opt: relocate single clusters to their best position, exact
    /// acceptance.
    fn or_opt(&self, ind: &mut Individual) {
        let m = ind.order.len();
        if m < 3 {
            return;
        }
        for _ in 0..2 {
            let mut improved = false;
            'scan: for from in 0..m {
                for to in 0..m {
                    if to == from {
                        continue;
                    }
                    let mut cand = ind.order.clone();
                    let cl = cand.remove(from);
                    cand.insert(to, cl);
                    let (cost, _) = self.cluster_opt(&cand);
                    if cost < ind.cost - 1e-12 {
                        ind.order = cand;
                        ind.cost = cost;
                        improved = true;
                        break 'scan;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
}
