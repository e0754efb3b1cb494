//! Exact point-to-point shortest distances on weighted undirected road graphs.
//!
//! The pipeline shrinks the input in two stages before any search runs:
//!
//! 1. `agents` finds deterministic routing areas (DRAs): hanging subgraphs that
//!    touch the rest of the graph through a single node, their agent. Distances
//!    inside a DRA are precomputed, and the graph shrinks to the agents.
//! 2. `partition` cuts the shrink graph into fragments of bounded size, and
//!    `supergraph` overlays the boundary nodes with per-fragment landmark
//!    structures (`landmarks`) so that boundary-to-boundary distances survive
//!    without the fragment interiors.
//!
//! A query then resolves both endpoints to their agents, reads the precomputed
//! agent legs, and runs a small search over the two endpoint fragments plus the
//! super graph. `speedups` supplies the accelerators that integrate with that
//! search (bidirectional Dijkstra, contraction hierarchies, arc flags), and
//! `disland` ties everything into a preprocess/query API with a serializable
//! index. `naive` holds slow reference implementations the fast paths are
//! validated against.

pub mod agents;
pub mod connectivity;
mod error;
pub mod graph;
pub mod landmarks;
pub mod naive;
pub mod partition;
pub mod speedups;
pub mod supergraph;

pub mod disland;

pub use error::{Error, Result};
pub use graph::{Distance, NodeId, WeightedGraph, UNREACHABLE};
