//! Minimum-cost boustrophedon coverage paths for polygon flight corridors
//! with no-fly zones.
//!
//! The pipeline erodes the corridor by a wall clearance, decomposes it into
//! monotone cells (boustrophedon or trapezoidal scan line), expands each cell
//! into its sweep-pattern permutations, connects everything through
//! visibility-graph shortest paths into an E-GTSP adjacency graph, and solves
//! for the cheapest tour with an exact or a memetic solver.
//!
//! Interchangeable strategies (decomposition, cost model, solver) live behind
//! traits and are selected by name at runtime; see [`decomposition`],
//! [`cost`] and [`gtsp::solvers`].

pub mod cost;
pub mod decomposition;
pub mod error;
pub mod geom;
pub mod gtsp;
pub mod planner;
pub mod sweep;
pub mod visibility;

pub use error::{Error, Result};
