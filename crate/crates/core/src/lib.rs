//! Thermodynamic formalism on metric graphs.
//!
//! Builds the non-backtracking directed-edge shift of a graph, computes
//! pressure, entropy and equilibrium states for edge-length potentials, and
//! studies the entropy-one moduli surface with its pressure and
//! Weil-Petersson metrics, their Gaussian curvature and completeness.

pub mod error;
pub mod geometry;
pub mod graph;
pub mod numeric;
pub mod moduli;
pub mod catalog;
pub mod thermo;

pub use error::{Error, Result};
pub use graph::{DirectedEdgeSystem, Edge, UndirectedGraph};
pub use thermo::{EdgeWeighting, PerronData, Potential};
