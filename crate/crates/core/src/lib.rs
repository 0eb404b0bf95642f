//! List coloring of triangle-free hypergraphs of rank 3 by an iterated
//! semi-random procedure, followed by a local-resampling finisher.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod finisher;
pub mod harness;
pub mod hypergraph;
pub mod lists;
pub mod nibble;
pub mod params;
pub mod reduce;
pub mod rng;
pub mod triangle;

pub use error::{Error, Result};
pub use hypergraph::{DegreeProfile, Edge, HypergraphBuilder, RankedHypergraph, Vertex};
pub use lists::{Color, ListAssignment};
pub use triangle::{find_triangles, is_triangle_free, TriangleKind, TriangleWitness};
