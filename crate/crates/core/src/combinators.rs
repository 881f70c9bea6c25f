//! Building mergeable summaries out of mergeable summaries.
//!
//! A composition `(Σ₁(A), …, Σₘ(A))` merges component-wise, so it is exactly
//! mergeable whenever its parts are. The interval `[min, max]` is the
//! composition of min and max; a [`SchemaSummary`] is the composition of one
//! summary per record variable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{Record, Schema};
use crate::summary::{
    Extremum, ExtremumSummary, Mergeable, Summary, SummarySpec,
};
use crate::value::{Observation, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedSummary {
    pub parts: Vec<Summary>,
}

impl ComposedSummary {
    pub fn part(&self, i: usize) -> Option<&Summary> {
        self.parts.get(i)
    }

    /// `[m, M]` when this is the composition of a min and a max.
    pub fn as_interval(&self) -> Option<(Option<f64>, Option<f64>)> {
        match self.parts.as_slice() {
            [Summary::Extremum(ExtremumSummary {
                which: Extremum::Min,
                value: lo,
            }), Summary::Extremum(ExtremumSummary {
                which: Extremum::Max,
                value: hi,
            })] => Some((*lo, *hi)),
            _ => None,
        }
    }
}

impl Mergeable for ComposedSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::Incompatible {
                left: format!("composition of {}", self.parts.len()),
                right: format!("composition of {}", other.parts.len()),
                reason: "different number of parts".into(),
            });
        }
        Ok(ComposedSummary {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.merge(b))
                .collect::<Result<_>>()?,
        })
    }
}

/// `Σ₁ ⊕ … ⊕ Σₘ`.
pub fn compose(specs: Vec<SummarySpec>) -> Result<SummarySpec> {
    if specs.is_empty() {
        return Err(Error::InvalidSpec("composition of nothing".into()));
    }
    Ok(SummarySpec::Composed { parts: specs })
}

/// `[min_{X∈A} v(X), max_{X∈A} v(X)]` of a numeric variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSummary {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl IntervalSummary {
    pub fn summarize(values: &[f64]) -> Result<Self> {
        let values: Vec<Value> = values.iter().map(|&x| Value::Num(x)).collect();
        let s = SummarySpec::interval().summarize(&values)?;
        Ok(IntervalSummary::try_from(&s).expect("interval spec yields an interval"))
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.lo.zip(self.hi)
    }

    pub fn to_summary(&self) -> Summary {
        Summary::Composed(ComposedSummary {
            parts: vec![
                Summary::Extremum(ExtremumSummary {
                    which: Extremum::Min,
                    value: self.lo,
                }),
                Summary::Extremum(ExtremumSummary {
                    which: Extremum::Max,
                    value: self.hi,
                }),
            ],
        })
    }
}

impl TryFrom<&Summary> for IntervalSummary {
    type Error = Error;

    fn try_from(s: &Summary) -> Result<Self> {
        match s {
            Summary::Composed(c) => c
                .as_interval()
                .map(|(lo, hi)| IntervalSummary { lo, hi })
                .ok_or_else(|| Error::InvalidSpec("not an interval summary".into())),
            _ => Err(Error::InvalidSpec("not an interval summary".into())),
        }
    }
}

impl Mergeable for IntervalSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        IntervalSummary::try_from(&self.to_summary().merge(&other.to_summary())?)
    }
}

/// `interval(values)`.
pub fn interval(values: &[f64]) -> Result<IntervalSummary> {
    IntervalSummary::summarize(values)
}

/// One summary per schema variable, all over the same set of units.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchemaSummary {
    pub variables: BTreeMap<String, Summary>,
}

impl SchemaSummary {
    pub fn empty(schema: &Schema) -> Self {
        SchemaSummary {
            variables: schema
                .variables
                .iter()
                .map(|v| (v.name.clone(), v.summary.empty()))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Summary> {
        self.variables.get(name)
    }

    /// Spec of every variable, keyed by name.
    pub fn specs(&self) -> BTreeMap<String, SummarySpec> {
        self.variables
            .iter()
            .map(|(k, v)| (k.clone(), v.spec()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.variables.values().try_for_each(Summary::validate)?;
        let mut sizes = self.variables.iter().filter_map(|(k, s)| s.units().map(|n| (k, n)));
        if let Some((first_name, n)) = sizes.next() {
            if let Some((name, m)) = sizes.find(|(_, m)| *m != n) {
                return Err(Error::Invariant(format!(
                    "variable {first_name:?} covers {n} units but {name:?} covers {m}"
                )));
            }
        }
        Ok(())
    }

    /// Largest relative deviation across variables; `None` on any structural
    /// difference.
    pub fn deviation(&self, other: &SchemaSummary) -> Option<f64> {
        if self.variables.len() != other.variables.len() {
            return None;
        }
        self.variables.iter().try_fold(0.0, |acc: f64, (k, a)| {
            let b = other.variables.get(k)?;
            Some(acc.max(a.deviation(b)?))
        })
    }
}

impl Mergeable for SchemaSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.variables.len() != other.variables.len()
            || self.variables.keys().ne(other.variables.keys())
        {
            return Err(Error::Incompatible {
                left: format!("{:?}", self.variables.keys().collect::<Vec<_>>()),
                right: format!("{:?}", other.variables.keys().collect::<Vec<_>>()),
                reason: "different variable sets".into(),
            });
        }
        let variables = self
            .variables
            .iter()
            .zip(&other.variables)
            .map(|((k, a), (_, b))| Ok((k.clone(), a.merge(b)?)))
            .collect::<Result<_>>()?;
        Ok(SchemaSummary { variables })
    }
}

/// Summarizes every schema variable over the same records.
pub fn summarize_records(schema: &Schema, records: &[Record]) -> Result<SchemaSummary> {
    let width = schema.variables.len();
    let mut variables = BTreeMap::new();
    for (i, var) in schema.variables.iter().enumerate() {
        let mut obs = Vec::with_capacity(records.len());
        for r in records {
            if r.values.len() != width {
                return Err(Error::Schema(format!(
                    "unit {} has {} values, schema declares {}",
                    r.unit,
                    r.values.len(),
                    width
                )));
            }
            var.check_value(&r.values[i])?;
            obs.push(Observation::new(r.unit, r.values[i].clone()));
        }
        variables.insert(var.name.clone(), var.summary.summarize_observations(&obs)?);
    }
    Ok(SchemaSummary { variables })
}
