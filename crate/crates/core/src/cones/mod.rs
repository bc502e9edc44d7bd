//! Mapping cones: symbolic expressions, duals, sampling and membership.

mod expr;
mod member;
mod probe;
mod sample;
pub mod search;
mod verdict;

pub use expr::{dual_expr, BaseCone, ConeExpr};
pub use member::{member, pair, witness_search, WitnessFound};
pub use probe::{bidual_inclusion, mcs_stability_probe, symmetric_dual_probe, ProbeReport};
pub use sample::{sample_generators, GeneratorSet};
pub use verdict::{
    Certificate, Diagnostics, Evidence, MemberConfig, Side, Status, Verdict, Witness, RANK_TOL, RECONSTRUCTION_TOL,
};
