//! Map file I/O, synthetic world generation, SVG rendering and the
//! benchmark harness around the coverage planner.

pub mod bench;
pub mod gen;
pub mod mapfile;
pub mod svg;
