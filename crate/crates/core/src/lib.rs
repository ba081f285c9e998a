//! Partial representation extension for proper interval, interval, path and
//! chordal graphs represented as subtrees of a host tree.

pub mod coord;
pub mod hardness;
pub mod intg;
pub mod io;
pub mod model;
pub mod oracle;
pub mod packing;
pub mod pint;
pub mod prep;
pub mod realize;
pub mod solvers;

pub use model::*;
