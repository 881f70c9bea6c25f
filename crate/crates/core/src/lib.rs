//! Exactly mergeable summaries.
//!
//! A summary `Σ(A)` of the values measured on a set of units `A` is exactly
//! mergeable when it has a fixed small size and, for disjoint `A` and `B`,
//! `Σ(A ∪ B)` can be computed from `Σ(A)` and `Σ(B)` alone. This crate
//! provides such summaries ([`summary`]), ways to compose them
//! ([`combinators`]), a harness that checks the merge law against brute-force
//! recomputation and searches for counterexamples for statistics that are not
//! mergeable ([`verification`]), record ingestion and partitioning
//! ([`ingestion`]), and a partitioned aggregation engine with a canonical
//! summary-file format ([`engine`]).

pub mod accum;
pub mod combinators;
pub mod engine;
pub mod error;
pub mod ingestion;
pub mod schema;
pub mod summary;
pub mod value;
pub mod verification;

pub use combinators::{compose, interval, summarize_records, ComposedSummary, IntervalSummary, SchemaSummary};
pub use engine::{aggregate, Aggregate, Encoding, ReductionMode, ReductionPlan, SummaryFile};
pub use error::{Error, Result};
pub use ingestion::{Dataset, Format, Partition, PartitionId, SplitStrategy};
pub use schema::{Record, Schema, VariableSpec, VariableType};
pub use summary::{
    from_distribution, merge, merge_all, summarize, to_distribution, BarChart, CountSummary,
    DiscreteDistribution, ExtremeK, Extremum, ExtremumSummary, Histogram, MeanSd, MeanSummary,
    Mergeable, MembershipCount, MomentSummary, Order, Reference, SumSummary, Summary, SummarySpec,
    Support,
};
pub use value::{Observation, UnitId, Value};
