//! The `SL(2, Z)` action on square-tiled surfaces and orbit enumeration.

mod action;
mod graph;

pub use action::{apply_generator, apply_word, canonical_form, DeckSurface, Move};
pub use graph::{enumerate_orbit, OrbitEdge, OrbitGraph, DEFAULT_ORBIT_CAP};
