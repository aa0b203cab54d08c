//! The Diophantine pipeline: exceptional sets, hypothesis checks, bounded
//! Thue–Mahler search, solution audits and the level / trace searches.

pub mod audit;
pub mod distinguish;
pub mod levels;
pub mod normalize;
pub mod search;
pub mod sf;

pub use audit::{audit_solution, AuditInput, AuditReport, Check, FiniteFlatEntry, Verdict};
pub use distinguish::{distinguishing_prime, Distinguisher};
pub use levels::{candidate_count, exponent_bound, serre_level_candidates, DEFAULT_LEVEL_CAP};
pub use normalize::{normalize_pair, principal_generator, NormalizedPair};
pub use search::{
    canonical_order, orbit_representative, tm_search, tm_search_first, tm_search_with,
    SearchOptions, SearchProgress, TMSolution,
};
pub use sf::{
    bad_primes, build_sf, build_sf_with_policy, theorem_hypothesis, ExceptionalSet, HkMember,
    HkPolicy,
};
