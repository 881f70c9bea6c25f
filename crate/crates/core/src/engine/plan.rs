use std::collections::{BTreeSet, HashSet};
use std::str::FromStr;

use rayon::prelude::*;

use crate::combinators::{summarize_records, SchemaSummary};
use crate::error::{Error, Result};
use crate::ingestion::{Partition, PartitionId};
use crate::schema::Schema;
use crate::summary::Mergeable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    /// `((s₁ * s₂) * s₃) * …` in partition order.
    SequentialLeftFold,
    /// Pairwise tree reduction on a pool of `workers` threads.
    BalancedTree { workers: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionPlan {
    pub mode: ReductionMode,
    /// Fix the reduction shape so floating results repeat run to run. Without
    /// it a tree plan lets the scheduler pick the shape.
    pub deterministic: bool,
}

impl ReductionPlan {
    pub fn sequential() -> Self {
        ReductionPlan {
            mode: ReductionMode::SequentialLeftFold,
            deterministic: true,
        }
    }

    pub fn tree(workers: usize) -> Self {
        ReductionPlan {
            mode: ReductionMode::BalancedTree { workers },
            deterministic: true,
        }
    }

    pub fn nondeterministic(mut self) -> Self {
        self.deterministic = false;
        self
    }
}

impl Default for ReductionPlan {
    fn default() -> Self {
        ReductionPlan::sequential()
    }
}

impl FromStr for ReductionMode {
    type Err = Error;

    /// `sequential` or `tree[:WORKERS]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "sequential" => Ok(ReductionMode::SequentialLeftFold),
            None if s == "tree" => Ok(ReductionMode::BalancedTree {
                workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            }),
            Some(("tree", w)) => match w.parse::<usize>() {
                Ok(workers) if workers >= 1 => Ok(ReductionMode::BalancedTree { workers }),
                _ => Err(Error::InvalidSpec(format!("bad worker count {w:?}"))),
            },
            _ => Err(Error::InvalidSpec(format!("unknown reduction plan {s:?}"))),
        }
    }
}

/// Output of [`aggregate`]: the merged summary and the partitions it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub summary: SchemaSummary,
    pub provenance: BTreeSet<PartitionId>,
}

fn tree_reduce(items: &[SchemaSummary]) -> Result<SchemaSummary> {
    match items {
        [] => unreachable!("tree_reduce on an empty slice"),
        [one] => Ok(one.clone()),
        _ => {
            let mid = items.len().div_ceil(2);
            let (left, right) = rayon::join(|| tree_reduce(&items[..mid]), || tree_reduce(&items[mid..]));
            left?.merge(&right?)
        }
    }
}

fn check_disjoint(partitions: &[Partition]) -> Result<()> {
    let mut ids = HashSet::new();
    let mut units = HashSet::new();
    for p in partitions {
        if !ids.insert(&p.id) {
            return Err(Error::Overlap(format!("partition {} appears twice", p.id)));
        }
        for r in &p.records {
            if !units.insert(r.unit) {
                return Err(Error::Overlap(format!(
                    "unit {} appears in more than one partition (second time in {})",
                    r.unit, p.id
                )));
            }
        }
    }
    Ok(())
}

/// Summarizes each partition and reduces the results by merging. Partitions
/// must be pairwise disjoint in unit ids.
pub fn aggregate(partitions: &[Partition], schema: &Schema, plan: &ReductionPlan) -> Result<Aggregate> {
    schema.validate()?;
    check_disjoint(partitions)?;
    let provenance = partitions.iter().map(|p| p.id.clone()).collect();
    if partitions.is_empty() {
        return Ok(Aggregate {
            summary: SchemaSummary::empty(schema),
            provenance,
        });
    }
    let summary = match plan.mode {
        ReductionMode::SequentialLeftFold => {
            let mut acc: Option<SchemaSummary> = None;
            for p in partitions {
                let s = summarize_records(schema, &p.records)?;
                acc = Some(match acc {
                    Some(a) => a.merge(&s)?,
                    None => s,
                });
            }
            acc.expect("at least one partition")
        }
        ReductionMode::BalancedTree { workers } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            pool.install(|| -> Result<SchemaSummary> {
                if plan.deterministic {
                    let parts = partitions
                        .par_iter()
                        .map(|p| summarize_records(schema, &p.records))
                        .collect::<Result<Vec<_>>>()?;
                    tree_reduce(&parts)
                } else {
                    partitions
                        .par_iter()
                        .map(|p| summarize_records(schema, &p.records))
                        .try_reduce_with(|a, b| a.merge(&b))
                        .expect("at least one partition")
                }
            })?
        }
    };
    Ok(Aggregate { summary, provenance })
}
