//! Randomized greedy packing of degenerate graphs into dense hosts.
//!
//! The crate covers the whole pipeline:
//!
//! - [`graph`], [`degeneracy`], [`prepare`]: graphs, degeneracy orderings and
//!   the preprocessing that turns a family of degenerate guests into spanning
//!   guests with an independent, equal-degree tail;
//! - [`engine`]: the bulk/reservoir split, the sequential random greedy
//!   embedding, the matching-based completion and an independent checker;
//! - [`audit`]: measured deviations from quasirandomness and its diet,
//!   codiet and cover variants;
//! - [`generators`]: seeded guest and host generators;
//! - [`harness`]: multi-trial experiments with CSV and JSON output.

pub mod audit;
pub mod degeneracy;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod prepare;
pub mod rng;
pub mod vertex_set;

pub use degeneracy::{
    degeneracy, degeneracy_order, equal_degree_independent_set, sum_sq_degrees, EqualDegreeSet,
    OrderedGraph,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use prepare::{prepare_guest_family, PrepareOptions, PreparedFamily, PreparedGuest};
pub use vertex_set::VertexSet;
