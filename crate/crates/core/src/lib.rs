//! Combinatorial machinery for working with tangles, minors, spiders,
//! vortices and surface embeddings on small multigraphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the multigraph substrate, subgraph references,
//!   separations, file formats and disjoint-path computations.
//! * [`tangle`] enumerates separations and tangles and answers questions
//!   about freeness, truncation and induced tangles.
//! * [`minor`] finds and verifies minor and subdivision models.
//! * [`spider`] packs and covers spiders and runs the packing/covering
//!   dichotomy.
//! * [`vortex`] measures vortex depth, builds linear decompositions and
//!   checks segregations and centrality.
//! * [`surface`] traces embeddings, computes Euler genus, region covers,
//!   radial drawings, the atom metric and zones.
//! * [`certify`] validates structure certificates and arrangements.
//!
//! Everything is deterministic: identical inputs produce byte-identical
//! outputs, and all search loops visit candidates in a fixed order.

pub mod certify;
pub mod fixtures;
pub mod graph;
pub mod guard;
pub mod minor;
pub mod spider;
pub mod surface;
pub mod tangle;
pub mod vortex;

pub use graph::{EdgeId, MultiGraph, Separation, SubgraphRef, VertexId};
pub use guard::{GuardError, Guards};
// Tangle re-export comes online with the tangle module below.
