//! Exact finite models for multiple recurrence along homomorphism patterns.
//!
//! Everything here runs on finite abelian groups: acting groups are explicit
//! truncations `∏ ℤ/nᵢ`, phase spaces are finite point sets with uniform
//! measure, roots of unity are residues, and averages are exact elements of
//! cyclotomic fields. Floating point enters only at seminorm roots.

pub mod analysis;
pub mod budget;
pub mod cohomology;
pub mod combinatorics;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod systems;
pub mod z2patterns;

pub use error::{Error, Result};
