//! Laplace spectra of metric graphs with standard (Kirchhoff) vertex
//! conditions, and recovery of the Euler characteristic and other
//! topological invariants from finite sequences of eigenvalues.

pub mod error;
pub mod euler;
pub mod format;
pub mod graph;
pub mod resonance;
pub mod secular;
pub mod solver;
pub mod spectrum;
mod stats;
pub mod topology;

pub use error::{Error, Result};
pub use graph::{Edge, GraphSummary, LengthSpec, MetricGraph, ValidationReport, Violation};
pub use secular::{bond_evolution, SecularSystem};
pub use solver::{counting_function, solve, verify_weyl, SolverConfig, WeylReport};
pub use spectrum::{Provenance, Spectrum};
