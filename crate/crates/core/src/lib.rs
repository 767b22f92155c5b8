//! Hierarchical graph store: a balanced recursive partition of a graph kept
//! as a tree of supernodes, with the edges between sibling communities
//! bundled at their parent so that connectivity between any two groups is
//! answered exactly without touching leaf subgraphs.
//!
//! Typical flow: [`graph::load_graph`], [`pipeline::build_store`], then
//! [`engine::Engine::open`] for queries.

pub mod audit;
pub mod connectivity;
pub mod engine;
pub mod error;
pub mod graph;
pub mod layout;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod server;
pub mod synth;
pub mod tree;

pub use error::{Error, Result};
