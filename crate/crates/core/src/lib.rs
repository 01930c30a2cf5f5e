//! Weighing-matrix lattices and Lee-metric codes in exact arithmetic.

// Index loops mirror the matrix algebra more plainly than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod budget;
pub mod cli;
pub mod codes;
pub mod error;
pub mod intmat;
pub mod io;
pub mod lattice;
pub mod matrices;
pub mod sylvester;
pub mod transform;
pub mod verify;

pub use budget::Budgets;
pub use codes::{CodeDistance, LinearCodeZm, Metric};
pub use error::{Error, Result};
pub use intmat::IntMatrix;
pub use lattice::{CosetAtlas, DistanceResult, Lattice};
pub use matrices::{Symmetry, WeighingMatrix};
