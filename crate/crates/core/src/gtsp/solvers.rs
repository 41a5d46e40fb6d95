//! Solver strategy registry.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{AdjacencyGraph, ExactSolver, MemeticParams, MemeticSolver, Solution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Memetic,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Exact => "exact",
            SolverKind::Memetic => "memetic",
        })
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "memetic" => Ok(SolverKind::Memetic),
            other => Err(Error::UnknownStrategy {
                kind: "solver",
                name: other.to_string(),
                available: "exact, memetic",
            }),
        }
    }
}

/// An E-GTSP solving strategy.
pub trait GtspSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> SolverKind;
    fn solve(&self, graph: &AdjacencyGraph) -> Result<Solution>;
}

/// Runtime knobs shared by the registry factories.
#[derive(Clone, Copy, Debug)]
pub struct SolverOpts {
    pub seed: u64,
    pub exact_state_budget: u64,
    pub time_budget: Option<Duration>,
}

impl Default for SolverOpts {
    fn default() -> Self {
        SolverOpts {
            seed: 0,
            exact_state_budget: ExactSolver::DEFAULT_STATE_BUDGET,
            time_budget: None,
        }
    }
}

/// Registry lookup by strategy name.
pub fn by_name(name: &str, opts: &SolverOpts) -> Result<Box<dyn GtspSolver>> {
    match name.parse::<SolverKind>()? {
        SolverKind::Exact => Ok(Box::new(ExactSolver {
            state_budget: opts.exact_state_budget,
            deadline: opts.time_budget,
        })),
        SolverKind::Memetic => Ok(Box::new(MemeticSolver {
            seed: opts.seed,
            params: MemeticParams {
                time_budget: opts.time_budget,
                ..MemeticParams::default()
            },
        })),
    }
}

pub fn names() -> &'static str {
    "exact, memetic"
}

/// Exhaustive product-graph Dijkstra with default budgets.
pub fn solve_exact(graph: &AdjacencyGraph) -> Result<Solution> {
    ExactSolver::default().solve(graph)
}

/// Seeded memetic search with default budgets.
pub fn solve_memetic(graph: &AdjacencyGraph, seed: u64) -> Result<Solution> {
    MemeticSolver { seed, params: MemeticParams::default() }.solve(graph)
}
