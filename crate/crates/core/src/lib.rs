//! Discrete cubical homology and GLMY path homology of finite simple graphs.

pub mod chain;
pub mod cubical;
pub mod error;
pub mod graph;
pub mod homotopy;
pub mod linalg;
pub mod path;
pub mod psi;

pub use chain::{Chain, ComplexSlice, ComputeOptions};
pub use error::{Error, Result};
pub use graph::{Graph, VertexMap};
