//! Exact construction of the weight-zero marked graph complex and the
//! marked oriented graph complex, their cohomology, and the spanning-forest
//! chain map between them.

pub mod complex;
pub mod enumerate;
pub mod graph;
pub mod linalg;
pub mod zivkovic;

pub use graph::{HalfEdgeGraph, Label};
