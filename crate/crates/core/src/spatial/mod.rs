//! Grid storage, boundary conditions, obstacle geometry and the spatial operator.

mod boundary;
mod grid;
mod operator;
mod topology;

pub use boundary::{fill_ghosts, BoundarySpec, CornerFix, EdgeCondition};
pub use grid::{Field, Grid2D, GHOST};
pub use operator::{Discretization, SourceTerm};
pub use topology::{Obstacle, Span, Topology};
