//! Exhaustive exact solver: Dijkstra over the product of the adjacency
//! graph and the Boolean lattice of visited cell clusters. The state count
//! `2^m * n` grows exponentially in the cluster count, so the solver aborts
//! with an explicit intractability error beyond its state budget instead of
//! falling back silently.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::solvers::{GtspSolver, SolverKind};
use super::{AdjacencyGraph, Solution};
use crate::error::{Error, Result};

pub struct ExactSolver {
    pub state_budget: u64,
    pub deadline: Option<Duration>,
}

impl ExactSolver {
    pub const DEFAULT_STATE_BUDGET: u64 = 1 << 20;
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver { state_budget: Self::DEFAULT_STATE_BUDGET, deadline: None }
    }
}

impl GtspSolver for ExactSolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn kind(&self) -> SolverKind {
        SolverKind::Exact
    }

    fn solve(&self, g: &AdjacencyGraph) -> Result<Solution> {
        let t0 = Instant::now();
        let n = g.node_count();
        let m = g.cell_cluster_count();
        if m == 0 {
            return Err(Error::InvalidParameter("instance has no cell clusters".into()));
        }

        let states: u128 = if m >= 100 {
            u128::MAX
        } else {
            (n as u128) << m
        };
        // State indices are stored as u32 in the heap and parent map.
        let budget = self.state_budget.min(u32::MAX as u64);
        if states > budget as u128 {
            return Err(Error::Intractable { states, budget: self.state_budget });
        }
        let states = states as usize;
        let full: u64 = (1 << m) - 1;
        let idx = |node: usize, mask: u64| mask as usize * n + node;

        let mut dist = vec![f64::INFINITY; states];
        let mut parent = vec![u32::MAX; states];
        let mut heap: BinaryHeap<Reverse<(Key, u32)>> = BinaryHeap::new();

        let start_state = idx(g.start_node(), 0);
        dist[start_state] = 0.0;
        heap.push(Reverse((Key(0.0), start_state as u32)));

        let goal_state = idx(g.goal_node(), full);
        let mut pops = 0u64;
        while let Some(Reverse((Key(d), state))) = heap.pop() {
            let state = state as usize;
            if d > dist[state] {
                continue;
            }
            pops += 1;
            if let Some(limit) = self.deadline {
                if pops % 8192 == 0 && t0.elapsed() > limit {
                    return Err(Error::Timeout(limit.as_secs_f64()));
                }
            }
            if state == goal_state {
                break;
            }
            let node = state % n;
            let mask = (state / n) as u64;
            for to in 0..n {
                let c = g.cost(node, to);
                if !c.is_finite() {
                    continue;
                }
                let next = if to == g.goal_node() {
                    if mask != full {
                        continue;
                    }
                    goal_state
                } else {
                    let cl = g.nodes()[to].cluster;
                    debug_assert!(cl < m);
                    let bit = 1u64 << cl;
                    if mask & bit != 0 {
                        continue;
                    }
                    idx(to, mask | bit)
                };
                let nd = d + c;
                if nd < dist[next] {
                    dist[next] = nd;
                    parent[next] = state as u32;
                    heap.push(Reverse((Key(nd), next as u32)));
                }
            }
        }

        if !dist[goal_state].is_finite() {
            let (s, t) = (g.nodes()[g.start_node()].entry, g.nodes()[g.goal_node()].entry);
            return Err(Error::NoPath { x0: s.x, y0: s.y, x1: t.x, y1: t.y });
        }

        let mut sequence = Vec::with_capacity(m + 2);
        let mut cur = goal_state;
        loop {
            sequence.push(cur % n);
            if cur == start_state {
                break;
            }
            cur = parent[cur] as usize;
        }
        sequence.reverse();

        Ok(Solution {
            sequence,
            total_cost: dist[goal_state],
            solver: SolverKind::Exact,
            wall_time: t0.elapsed().as_secs_f64(),
        })
    }
}

/// Heap key with a total order (costs are never NaN).
#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{brute_force, random_instance};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_cluster_single_node() {
        let g = AdjacencyGraph::synthetic(&[1], |from, to| (from + 2 * to) as f64);
        let sol = solve(&g);
        assert!(g.is_valid_sequence(&sol.sequence));
        let expect = g.cost(g.start_node(), 0) + g.cost(0, g.goal_node());
        assert!((sol.total_cost - expect).abs() < 1e-12);
    }

    fn solve(g: &AdjacencyGraph) -> Solution {
        ExactSolver::default().solve(g).unwrap()
    }

    #[test]
    fn matches_enumeration_on_three_by_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_instance(&mut rng, 3, 2);
            let sol = solve(&g);
            assert!(g.is_valid_sequence(&sol.sequence));
            assert!((sol.total_cost - brute_force(&g)).abs() <= 1e-9);
            assert!((g.sequence_cost(&sol.sequence) - sol.total_cost).abs() <= 1e-9);
        }
    }

    #[test]
    fn matches_enumeration_on_wider_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let g = random_instance(&mut rng, 5, 4);
            let sol = solve(&g);
            assert!((sol.total_cost - brute_force(&g)).abs() <= 1e-9);
        }
    }

    #[test]
    fn state_budget_aborts_loudly() {
        let sizes = vec![1usize; 12];
        let g = AdjacencyGraph::synthetic(&sizes, |_, _| 1.0);
        let tight = ExactSolver { state_budget: 1 << 10, deadline: None };
        assert!(matches!(tight.solve(&g), Err(Error::Intractable { .. })));
        // The default budget covers the same instance: 13 unit arcs.
        let sol = solve(&g);
        assert!((sol.total_cost - 13.0).abs() < 1e-9);
    }
}
