//! forestlab: exact counting, canonization, sampling and limit-law
//! verification for random forests and bridge-addable graph classes.
//!
//! The crate verifies, exactly where possible and by seeded Monte Carlo
//! otherwise, the local limit behavior of uniform random forests: the law of
//! the small components, the pendant-tree densities, the 1 + Poisson(1/2)
//! component law, and the local convergence to the uniform infinite forest
//! (a semi-infinite spine of Poisson(1) Galton-Watson trees).

pub mod canon;
pub mod classes;
pub mod count;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod laws;
pub mod oracle;
pub mod prufer;
pub mod report;
pub mod sample;
pub mod shapes;
pub mod stats;
pub mod verify;
pub mod weight;

pub use canon::{ForestShape, HullTreeCode, RootedTreeCode, UnrootedTreeCode};
pub use error::{Error, Result};
pub use graph::LabeledGraph;
