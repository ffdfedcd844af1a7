//! Exact and heuristic machinery for maximum crossing numbers of small graphs.
//!
//! The crate covers the thrackle calculus of small graphs, admissibility
//! filters for missed-pair sets, exhaustive candidate enumeration,
//! realizability decisions for crossing prescriptions, a crossing-maximizing
//! drawing heuristic, and a certificate pipeline that bounds the maximum
//! crossing number of `C3 x C3`.

pub mod bits;
pub mod error;
pub mod filters;
pub mod graph;
pub mod io;
pub mod map;
pub mod maximizer;
pub mod prescription;
pub mod realize;
pub mod pipeline;
pub mod search;
pub mod subgraph;

pub use bits::{EdgeSet, PairSet};
pub use error::{Error, Result};
pub use filters::{FilterContext, FilterKind, FilterReport, FilterSuite};
pub use graph::{build_named, cartesian_product, delete_vertex, thrackle_number, Graph, PairIndex};
pub use prescription::{MissedPairSet, Prescription};
pub use subgraph::{find_subgraphs, sub_thrackle_number, SubgraphEmbedding};
