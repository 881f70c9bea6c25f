//! Partitioned aggregation and the persisted summary format.

pub mod codec;
pub mod plan;

pub use codec::{decode_summary, encode_summary, merge_files, Encoding, SummaryFile, FORMAT_VERSION};
pub use plan::{aggregate, Aggregate, ReductionMode, ReductionPlan};
