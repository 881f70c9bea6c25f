//! Evidence for and against exact mergeability.
//!
//! [`oracle`] compares merged summaries with brute-force recomputation over
//! the union; [`harness`] drives it with seeded random splits; [`witness`]
//! checks and searches for quadruples proving a statistic is not exactly
//! mergeable.

pub mod harness;
pub mod oracle;
pub mod witness;

use std::collections::HashSet;

use crate::value::UnitId;

pub use harness::{random_split, random_trials, random_trials_with, DataGen, TrialSummary};
pub use oracle::{oracle_check, oracle_check_values, oracle_check_with, MergeReport, Outcome, Tolerance};
pub use witness::{
    check_witness, published_example, search_witness, StatValue, Statistic, WitnessQuadruple,
    WitnessReport,
};

/// `A ∩ B = ∅` on unit ids.
pub fn disjointness_guard(a: &[UnitId], b: &[UnitId]) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let set: HashSet<&UnitId> = small.iter().collect();
    !large.iter().any(|id| set.contains(id))
}
