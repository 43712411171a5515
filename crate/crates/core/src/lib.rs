//! Parity-encoded quantum computation and its measurement-based counterpart
//! on bipartite graph states: stabiliser codes, a dense statevector
//! simulator, both execution engines, and an executable flow theory.

mod error;
pub mod gflow;
pub mod graph;
pub mod layout;
pub mod mbqc;
pub mod parity;
pub mod pauli;
pub mod program;
pub mod sim;

pub use error::{Error, Result};
