//! Independent transversals in vertex-partitioned graphs.
//!
//! Builds the extremal constructions, counts and finds independent
//! transversals exactly, checks induced matching configurations, and
//! compares the results against closed-form bounds.

pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod critical;
pub mod graph;
pub mod imc;
pub mod solver;

pub use bitset::VertexSet;
pub use constructions::{build_g1, build_g2, Construction, ConstructionError, PairSystem};
pub use critical::{criticalize, is_critical, CriticalReport};
pub use graph::{Edge, GraphError, MultipartiteGraph};
pub use imc::{verify_imc, Imc, ImcError};
pub use solver::{count_its, find_it, Transversal};
