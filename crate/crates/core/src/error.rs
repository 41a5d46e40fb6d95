use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stages used for error attribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Offset,
    Terminals,
    Decomposition,
    Sweeps,
    Graph,
    Solve,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Offset => "offset",
            Stage::Terminals => "terminals",
            Stage::Decomposition => "decomposition",
            Stage::Sweeps => "sweeps",
            Stage::Graph => "graph",
            Stage::Solve => "solve",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate is not finite")]
    NonFinite,

    #[error("degenerate ring: {0}")]
    DegenerateRing(&'static str),

    #[error("ring is self-intersecting")]
    SelfIntersecting,

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("inward offset by {distance} m collapsed the region: {reason}")]
    OffsetCollapsed { distance: f64, reason: String },

    #[error("point ({x}, {y}) lies outside the free space")]
    OutsideFreeSpace { x: f64, y: f64 },

    #[error("no collision-free path from ({x0}, {y0}) to ({x1}, {y1})")]
    NoPath { x0: f64, y0: f64, x1: f64, y1: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cell {0} admits no sweepable direction")]
    NoSweepableDirection(usize),

    #[error("exact solver intractable: {states} product states exceed the budget of {budget}")]
    Intractable { states: u128, budget: u64 },

    #[error("solver exceeded its time budget of {0:.1} s")]
    Timeout(f64),

    #[error("unknown {kind} {name:?}; available: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: &'static str,
    },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: Stage) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Strips stage attribution, returning the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
