//! Exact combinatorial engine for sup-norms of alternating products of
//! circle orientation cocycles, and the simplicial-volume lower bounds they
//! induce for manifolds covered by products of hyperbolic planes.
//!
//! Everything is exact: circle configurations are weak orders (rank vectors
//! with ties), cocycle values are reduced `i64` fractions, and the norm
//! searches are exhaustive over symmetry-reduced class tables with
//! deterministic, thread-count-independent output.

pub mod bound;
pub mod cache;
pub mod cocycle;
pub mod configfile;
pub mod error;
pub mod ordercomb;
pub mod rat;
pub mod report;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use rat::Rat;
