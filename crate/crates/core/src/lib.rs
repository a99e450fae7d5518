//! Exact eternal domination and companion invariants for small graphs.

pub mod canon;
pub mod constructions;
pub mod eternal;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod invariants;
pub mod pipeline;

pub use canon::{are_isomorphic, canonical_form, canonical_labeling, CanonicalForm, Labeling};
pub use generate::{generate_connected, Constraint, GenerateError, GenerateOptions, Generator};
pub use graph::{Graph, GraphError, VertexSet, MAX_VERTICES};
