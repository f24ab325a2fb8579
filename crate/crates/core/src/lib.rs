//! Exact analysis of toric morphisms.
//!
//! Given a map of fans `φ: Σ' → Σ`, the crate computes the image fan, the
//! fibers over every torus orbit of the base (primitive cones, relative
//! stars, indices), the fibration criterion and the flattening
//! stratification. On the polytope side it handles lattice polytopes,
//! duality, restriction of line bundles to orbit closures and fibers, and
//! the regrouping of sections into fibred form. All arithmetic is exact.

pub mod analysis;
pub mod bundle;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod fan;
pub mod io;
pub mod lattice;
pub mod polyhedral;
pub mod morphism;
pub mod polytope;

pub use error::{Error, Result};
