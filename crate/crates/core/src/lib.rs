//! Computational symbolic dynamics for intermediate β-shifts.
//!
//! The map `T(x) = βx + α (mod 1)` with `0 ≤ α < 1`, `β > 2` generates a
//! subshift over `{1, …, k}`. This crate builds its Hofbauer Markov diagram,
//! represents invariant measures through cylinder masses, computes entropies
//! and materializes the Moran-type construction of sets of generic points.

pub mod arith;
pub mod diagram;
pub mod entropy;
pub mod error;
pub mod generic;
pub mod graph;
pub mod measures;

pub use arith::{ArithmeticMode, OpenInterval, Params, Real, Word};
pub use diagram::{DPath, Diagram, Vertex, VertexId};
pub use error::{Error, Result};
pub use measures::{CylinderMeasure, MarkovMeasure, MixtureMeasure, PeriodicMeasure};
