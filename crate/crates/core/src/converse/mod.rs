//! The converse side: genie-aided bounds per `(demand, permutation)`, memory
//! profiles, the counted bounds and their brute-force verification, and the
//! optimized lower bound.

mod bound;
mod counting;
mod genie;
mod profile;

pub use bound::{theorem1_bound, theorem1_objective, theorem1_objective_at, Theorem1Bound};
pub use counting::{
    closed_form_appearances, counted_common_bound, counted_unique_bound, verify_genie_counting,
    ClassReport, GenieCountingReport, UniqueBound,
};
pub use genie::{check_permutation, genie_cache, r_lb, GenieCache, GenieEntry};
pub use profile::{in_group_range, memory_profiles, MemoryProfile, Scalar};
