//! Exact cohomology of Abelian symplectic quotients of projective space by
//! the r-qubit torus, with a Monte Carlo cross-check of the
//! Duistermaat-Heckman densities.
//!
//! Module map:
//! - [`algebra`]: rationals, sparse polynomials, rational functions, residues.
//! - [`action`]: the weight matrix, fixed points and stage Euler factors.
//! - [`walls`]: walls of the moment hypercube, chambers, dendrites.
//! - [`engine`]: iterated-residue pairings and DH densities.
//! - [`ring`]: kernel generators, Groebner bases, Poincare series.
//! - [`oracle`]: sampling of uniform pure states and density comparison.

pub mod action;
pub mod algebra;
pub mod engine;
mod error;
pub mod oracle;
pub mod ring;
pub mod walls;

pub use error::{Error, Result};
