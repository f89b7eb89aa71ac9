//! Intersecting families of random subsets, k-covering sets built from them,
//! and the checks and bounds around minimum covering sets.

mod construct;
mod params;
mod search;
mod verify;

pub use construct::{
    attempt_rng, construct_intersecting_family, construct_k_covering, member_lists, quotient_verdict, random_subset,
    ConstructOptions, CoveringCertificate, IntersectingFamily, DEFAULT_MAX_ATTEMPTS,
};
pub use params::{
    cov_bounds, covering_condition, covering_condition_lhs, feasibility, sample_probability, size_threshold,
    GazdagParams,
};
pub use search::{
    exact_cov, exact_cov_witness, greedy_shrink_intersection, GreedyShrink, EXACT_COV_MAX_ORDER, GREEDY_MAX_ORDER,
};
pub use verify::{
    budget, covering_cost, intersecting_cost, left_quotient_set, translate_into, two_covering_equiv_xxinv,
    verify_intersecting, verify_k_covering, Verdict, Verification, VerifyMode, DEFAULT_BUDGET, DEFAULT_TRIALS,
};
