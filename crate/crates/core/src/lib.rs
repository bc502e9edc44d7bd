//! Positive maps between matrix algebras and their cones.
//!
//! Maps `Φ: B(K) → B(H)` are stored by their Choi matrices. On top of that
//! sit the typical mapping cones (`k`-positive, `k`-superpositive, CP), their
//! duals, membership decisions with checkable certificates and witnesses,
//! the family `Φ_λ = Tr − λ Ad_V`, and a randomized verifier for the
//! structural identities that tie them together.

pub mod cli;
pub mod cones;
pub mod error;
pub mod family;
pub mod linalg;
pub mod superop;
pub mod verifier;

pub use error::{Error, Result};
