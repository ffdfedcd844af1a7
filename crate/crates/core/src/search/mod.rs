//! Exhaustive candidate enumeration, survivor elimination, and exact maximum
//! crossing numbers of small graphs.

mod enumerate;

pub use enumerate::{
    canonical_key, enumerate_candidates, enumerate_with_context, CandidateQuery, Constraint, Enumeration,
    EnumerationMode,
};
mod maxcr;

pub use maxcr::{compute_maxcr_exact, k_subsets, MaxcrResult, ProfileLevel};
mod eliminate;

pub use eliminate::{eliminate_all, EliminationEntry, EliminationReport};
