//! Summary kinds and their exact merge operations.
//!
//! Every summary is a fixed-size value computed from the measurements of a
//! set of units. Merging two summaries of disjoint sets yields the summary of
//! their union; the empty summary of each kind is the identity. Disjointness
//! cannot be seen from the summaries themselves and is the caller's
//! obligation.

mod extreme_k;
mod frequency;
mod membership;
mod moments;
mod scalar;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use extreme_k::{ExtremeK, Order};
pub use frequency::{
    from_distribution, to_distribution, BarChart, DiscreteDistribution, Frequencies, Histogram,
    Support,
};
pub use membership::{MembershipCount, Reference};
pub use moments::{MeanSd, MomentSummary, MAX_MOMENT_ORDER};
pub use scalar::{CountSummary, Extremum, ExtremumSummary, MeanSummary, SumSummary};

use crate::combinators::ComposedSummary;
use crate::error::{Error, Result};
use crate::value::{fmt_real, Observation, Value};

/// A summary whose merge realizes `Σ(A ∪ B) = F(Σ(A), Σ(B))`.
pub trait Mergeable: Sized {
    fn merge(&self, other: &Self) -> Result<Self>;
}

pub(crate) fn incompatible(a: &impl fmt::Debug, b: &impl fmt::Debug, reason: &str) -> Error {
    fn short(s: String) -> String {
        if s.len() > 96 {
            let cut = (0..=96).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
            format!("{}…", &s[..cut])
        } else {
            s
        }
    }
    Error::Incompatible {
        left: short(format!("{a:?}")),
        right: short(format!("{b:?}")),
        reason: reason.to_string(),
    }
}

pub(crate) fn numeric_values(obs: &[Observation]) -> impl Iterator<Item = Result<f64>> + '_ {
    obs.iter().map(|o| o.value.as_finite())
}

/// Declarative description of a summary kind and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "SpecRepr")]
pub enum SummarySpec {
    Count,
    Min,
    Max,
    Sum,
    Mean,
    ExtremeK { k: usize, order: Order },
    Moments { order: usize },
    Membership { reference: Reference },
    BarChart { categories: Vec<String> },
    Histogram { edges: Vec<f64> },
    Distribution { support: Support },
    Composed { parts: Vec<SummarySpec> },
}

/// Accepted input form of a spec; `interval` is shorthand for `composed` of
/// `min` and `max`.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SpecRepr {
    Count,
    Min,
    Max,
    Sum,
    Mean,
    ExtremeK { k: usize, order: Order },
    Moments { order: usize },
    Membership { reference: Reference },
    BarChart { categories: Vec<String> },
    Histogram { edges: Vec<f64> },
    Distribution { support: Support },
    Composed { parts: Vec<SummarySpec> },
    Interval,
}

impl From<SpecRepr> for SummarySpec {
    fn from(r: SpecRepr) -> Self {
        match r {
            SpecRepr::Count => SummarySpec::Count,
            SpecRepr::Min => SummarySpec::Min,
            SpecRepr::Max => SummarySpec::Max,
            SpecRepr::Sum => SummarySpec::Sum,
            SpecRepr::Mean => SummarySpec::Mean,
            SpecRepr::ExtremeK { k, order } => SummarySpec::ExtremeK { k, order },
            SpecRepr::Moments { order } => SummarySpec::Moments { order },
            SpecRepr::Membership { reference } => SummarySpec::Membership { reference },
            SpecRepr::BarChart { categories } => SummarySpec::BarChart { categories },
            SpecRepr::Histogram { edges } => SummarySpec::Histogram { edges },
            SpecRepr::Distribution { support } => SummarySpec::Distribution { support },
            SpecRepr::Composed { parts } => SummarySpec::Composed { parts },
            SpecRepr::Interval => SummarySpec::interval(),
        }
    }
}

/// What kind of values a spec consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueDomain {
    Any,
    Numeric,
    Categorical,
}

impl SummarySpec {
    pub fn interval() -> Self {
        SummarySpec::Composed {
            parts: vec![SummarySpec::Min, SummarySpec::Max],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SummarySpec::Count => "count",
            SummarySpec::Min => "min",
            SummarySpec::Max => "max",
            SummarySpec::Sum => "sum",
            SummarySpec::Mean => "mean",
            SummarySpec::ExtremeK { .. } => "extreme_k",
            SummarySpec::Moments { .. } => "moments",
            SummarySpec::Membership { .. } => "membership",
            SummarySpec::BarChart { .. } => "bar_chart",
            SummarySpec::Histogram { .. } => "histogram",
            SummarySpec::Distribution { .. } => "distribution",
            SummarySpec::Composed { parts } if parts == &[SummarySpec::Min, SummarySpec::Max] => {
                "interval"
            }
            SummarySpec::Composed { .. } => "composed",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SummarySpec::ExtremeK { k: 0, .. } => {
                Err(Error::InvalidSpec("extreme_k needs k >= 1".into()))
            }
            SummarySpec::Moments { order } if !(2..=MAX_MOMENT_ORDER).contains(order) => {
                Err(Error::InvalidSpec(format!(
                    "moment order {order} outside 2..={MAX_MOMENT_ORDER}"
                )))
            }
            SummarySpec::Membership { reference } => reference.validate(),
            SummarySpec::BarChart { categories } => frequency::validate_categories(categories),
            SummarySpec::Histogram { edges } => frequency::validate_edges(edges),
            SummarySpec::Distribution { support } => support.validate(),
            SummarySpec::Composed { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidSpec("composition of nothing".into()));
                }
                parts.iter().try_for_each(SummarySpec::validate)
            }
            _ => Ok(()),
        }
    }

    /// `true` for kinds whose merge law holds bit-exactly (integer or
    /// order-based payloads); floating kinds hold it up to rounding.
    pub fn is_exact(&self) -> bool {
        match self {
            SummarySpec::Sum
            | SummarySpec::Mean
            | SummarySpec::Moments { .. }
            | SummarySpec::Distribution { .. } => false,
            SummarySpec::Composed { parts } => parts.iter().all(SummarySpec::is_exact),
            _ => true,
        }
    }

    pub fn domain(&self) -> ValueDomain {
        match self {
            SummarySpec::Count => ValueDomain::Any,
            SummarySpec::Membership { reference } => match reference {
                Reference::Range { .. } => ValueDomain::Numeric,
                Reference::Labels(_) => ValueDomain::Categorical,
                Reference::Units(_) => ValueDomain::Any,
            },
            SummarySpec::BarChart { .. } => ValueDomain::Categorical,
            SummarySpec::Distribution {
                support: Support::Categories(_),
            } => ValueDomain::Categorical,
            SummarySpec::Composed { parts } => {
                let mut domain = ValueDomain::Any;
                for p in parts {
                    match (domain, p.domain()) {
                        (d, ValueDomain::Any) => domain = d,
                        (ValueDomain::Any, d) => domain = d,
                        (a, b) if a == b => {}
                        // mixed domains: no value satisfies both
                        _ => return ValueDomain::Any,
                    }
                }
                domain
            }
            _ => ValueDomain::Numeric,
        }
    }

    /// The summary of the empty set.
    pub fn empty(&self) -> Summary {
        match self {
            SummarySpec::Count => Summary::Count(CountSummary::default()),
            SummarySpec::Min => Summary::Extremum(ExtremumSummary::empty(Extremum::Min)),
            SummarySpec::Max => Summary::Extremum(ExtremumSummary::empty(Extremum::Max)),
            SummarySpec::Sum => Summary::Sum(SumSummary::default()),
            SummarySpec::Mean => Summary::Mean(MeanSummary::default()),
            SummarySpec::ExtremeK { k, order } => Summary::ExtremeK(ExtremeK::empty(*k, *order)),
            SummarySpec::Moments { order } => Summary::Moments(MomentSummary::empty(*order)),
            SummarySpec::Membership { reference } => {
                Summary::Membership(MembershipCount::empty(reference.clone()))
            }
            SummarySpec::BarChart { categories } => {
                Summary::BarChart(BarChart::empty(categories.clone()))
            }
            SummarySpec::Histogram { edges } => Summary::Histogram(Histogram::empty(edges.clone())),
            SummarySpec::Distribution { support } => {
                Summary::Distribution(DiscreteDistribution::empty(support.clone()))
            }
            SummarySpec::Composed { parts } => Summary::Composed(ComposedSummary {
                parts: parts.iter().map(SummarySpec::empty).collect(),
            }),
        }
    }

    /// Computes the summary directly from raw observations.
    pub fn summarize_observations(&self, obs: &[Observation]) -> Result<Summary> {
        self.validate()?;
        Ok(match self {
            SummarySpec::Count => Summary::Count(CountSummary::summarize(obs)),
            SummarySpec::Min => Summary::Extremum(ExtremumSummary::summarize(Extremum::Min, obs)?),
            SummarySpec::Max => Summary::Extremum(ExtremumSummary::summarize(Extremum::Max, obs)?),
            SummarySpec::Sum => Summary::Sum(SumSummary::summarize(obs)?),
            SummarySpec::Mean => Summary::Mean(MeanSummary::summarize(obs)?),
            SummarySpec::ExtremeK { k, order } => {
                Summary::ExtremeK(ExtremeK::summarize(*k, *order, obs)?)
            }
            SummarySpec::Moments { order } => {
                Summary::Moments(MomentSummary::summarize(*order, obs)?)
            }
            SummarySpec::Membership { reference } => {
                Summary::Membership(MembershipCount::summarize(reference, obs)?)
            }
            SummarySpec::BarChart { categories } => {
                Summary::BarChart(BarChart::summarize(categories, obs)?)
            }
            SummarySpec::Histogram { edges } => Summary::Histogram(Histogram::summarize(edges, obs)?),
            SummarySpec::Distribution { support } => {
                Summary::Distribution(DiscreteDistribution::summarize(support, obs)?)
            }
            SummarySpec::Composed { parts } => Summary::Composed(ComposedSummary {
                parts: parts
                    .iter()
                    .map(|p| p.summarize_observations(obs))
                    .collect::<Result<_>>()?,
            }),
        })
    }

    pub fn summarize(&self, values: &[Value]) -> Result<Summary> {
        let obs: Vec<Observation> = values.iter().cloned().map(Observation::anonymous).collect();
        self.summarize_observations(&obs)
    }
}

/// Summary of a set of units: one of the exactly mergeable kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summary {
    Count(CountSummary),
    Extremum(ExtremumSummary),
    Sum(SumSummary),
    Mean(MeanSummary),
    ExtremeK(ExtremeK),
    Moments(MomentSummary),
    Membership(MembershipCount),
    BarChart(BarChart),
    Histogram(Histogram),
    Distribution(DiscreteDistribution),
    Composed(ComposedSummary),
}

/// `summarize(spec, values)`.
pub fn summarize(spec: &SummarySpec, values: &[Value]) -> Result<Summary> {
    spec.summarize(values)
}

/// `F(Σ(A), Σ(B))` for disjoint `A`, `B`.
pub fn merge(a: &Summary, b: &Summary) -> Result<Summary> {
    a.merge(b)
}

/// Left fold of [`merge`] over a non-empty sequence.
pub fn merge_all<'a, I>(items: I) -> Result<Summary>
where
    I: IntoIterator<Item = &'a Summary>,
{
    let mut iter = items.into_iter();
    let first = iter.next().ok_or(Error::EmptyMerge)?.clone();
    iter.try_fold(first, |acc, s| acc.merge(s))
}

impl Mergeable for Summary {
    fn merge(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (Summary::Count(a), Summary::Count(b)) => Summary::Count(a.merge(b)?),
            (Summary::Extremum(a), Summary::Extremum(b)) => Summary::Extremum(a.merge(b)?),
            (Summary::Sum(a), Summary::Sum(b)) => Summary::Sum(a.merge(b)?),
            (Summary::Mean(a), Summary::Mean(b)) => Summary::Mean(a.merge(b)?),
            (Summary::ExtremeK(a), Summary::ExtremeK(b)) => Summary::ExtremeK(a.merge(b)?),
            (Summary::Moments(a), Summary::Moments(b)) => Summary::Moments(a.merge(b)?),
            (Summary::Membership(a), Summary::Membership(b)) => Summary::Membership(a.merge(b)?),
            (Summary::BarChart(a), Summary::BarChart(b)) => Summary::BarChart(a.merge(b)?),
            (Summary::Histogram(a), Summary::Histogram(b)) => Summary::Histogram(a.merge(b)?),
            (Summary::Distribution(a), Summary::Distribution(b)) => {
                Summary::Distribution(a.merge(b)?)
            }
            (Summary::Composed(a), Summary::Composed(b)) => Summary::Composed(a.merge(b)?),
            (a, b) => {
                return Err(Error::Incompatible {
                    left: a.spec().name().into(),
                    right: b.spec().name().into(),
                    reason: "different summary kinds".into(),
                })
            }
        })
    }
}

fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

impl Summary {
    /// The spec (kind and parameters) this summary was built from.
    pub fn spec(&self) -> SummarySpec {
        match self {
            Summary::Count(_) => SummarySpec::Count,
            Summary::Extremum(e) => match e.which {
                Extremum::Min => SummarySpec::Min,
                Extremum::Max => SummarySpec::Max,
            },
            Summary::Sum(_) => SummarySpec::Sum,
            Summary::Mean(_) => SummarySpec::Mean,
            Summary::ExtremeK(e) => SummarySpec::ExtremeK {
                k: e.k,
                order: e.order,
            },
            Summary::Moments(m) => SummarySpec::Moments { order: m.order },
            Summary::Membership(m) => SummarySpec::Membership {
                reference: m.reference.clone(),
            },
            Summary::BarChart(b) => SummarySpec::BarChart {
                categories: b.categories.clone(),
            },
            Summary::Histogram(h) => SummarySpec::Histogram {
                edges: h.edges.clone(),
            },
            Summary::Distribution(d) => SummarySpec::Distribution {
                support: d.support.clone(),
            },
            Summary::Composed(c) => SummarySpec::Composed {
                parts: c.parts.iter().map(Summary::spec).collect(),
            },
        }
    }

    /// Checks the kind's structural invariants; used when loading summaries
    /// from outside the process.
    pub fn validate(&self) -> Result<()> {
        match self {
            Summary::Count(_) => Ok(()),
            Summary::Extremum(e) => e.validate(),
            Summary::Sum(s) => s.validate(),
            Summary::Mean(m) => m.validate(),
            Summary::ExtremeK(e) => e.validate(),
            Summary::Moments(m) => m.validate(),
            Summary::Membership(m) => m.validate(),
            Summary::BarChart(b) => b.validate(),
            Summary::Histogram(h) => h.validate(),
            Summary::Distribution(d) => d.validate(),
            Summary::Composed(c) => {
                if c.parts.is_empty() {
                    return Err(Error::Invariant("composition of nothing".into()));
                }
                c.parts.iter().try_for_each(Summary::validate)
            }
        }
    }

    /// Number of summarized units, for kinds that record it.
    pub fn units(&self) -> Option<u64> {
        match self {
            Summary::Count(c) => Some(c.n),
            Summary::Mean(m) => Some(m.n),
            Summary::Moments(m) => Some(m.n),
            Summary::Membership(m) => Some(m.n),
            Summary::BarChart(b) => Some(b.n),
            Summary::Histogram(h) => Some(h.n),
            Summary::Distribution(d) => Some(d.n),
            Summary::Composed(c) => c.parts.iter().find_map(Summary::units),
            _ => None,
        }
    }

    /// Largest relative difference between the floating fields of two
    /// summaries of the same kind, or `None` when they differ structurally
    /// (kind, parameters, counts or any exact field).
    pub fn deviation(&self, other: &Summary) -> Option<f64> {
        let max_rel = |a: &[f64], b: &[f64]| -> Option<f64> {
            (a.len() == b.len()).then(|| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| relative_error(*x, *y))
                    .fold(0.0, f64::max)
            })
        };
        match (self, other) {
            (Summary::Sum(a), Summary::Sum(b)) => Some(relative_error(a.total(), b.total())),
            (Summary::Mean(a), Summary::Mean(b)) => match (a.n == b.n, a.mean, b.mean) {
                (true, Some(x), Some(y)) => Some(relative_error(x, y)),
                (true, None, None) => Some(0.0),
                _ => None,
            },
            (Summary::Moments(a), Summary::Moments(b)) => {
                if a.order != b.order || a.n != b.n {
                    return None;
                }
                let xs: Vec<f64> = a.sums.iter().map(|s| s.value()).collect();
                let ys: Vec<f64> = b.sums.iter().map(|s| s.value()).collect();
                max_rel(&xs, &ys)
            }
            (Summary::Distribution(a), Summary::Distribution(b)) => {
                if a.support != b.support || a.n != b.n {
                    return None;
                }
                max_rel(&a.p, &b.p)
            }
            (Summary::Composed(a), Summary::Composed(b)) => {
                if a.parts.len() != b.parts.len() {
                    return None;
                }
                a.parts
                    .iter()
                    .zip(&b.parts)
                    .try_fold(0.0, |acc: f64, (x, y)| Some(acc.max(x.deviation(y)?)))
            }
            (a, b) => (a == b).then_some(0.0),
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_else(|| "-".into())
}

fn fmt_list<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summary::Count(c) => write!(f, "n={}", c.n),
            Summary::Extremum(e) => match e.which {
                Extremum::Min => write!(f, "min={}", fmt_opt(e.value)),
                Extremum::Max => write!(f, "max={}", fmt_opt(e.value)),
            },
            Summary::Sum(s) => write!(f, "sum={}", fmt_real(s.total())),
            Summary::Mean(m) => write!(f, "n={} mean={}", m.n, fmt_opt(m.mean)),
            Summary::ExtremeK(e) => {
                let tag = match e.order {
                    Order::SmallestFirst => "smallest",
                    Order::LargestFirst => "largest",
                };
                write!(f, "{tag}{}=[{}]", e.k, fmt_list(e.values.iter().map(|x| fmt_real(*x))))
            }
            Summary::Moments(m) => match m.mean_view() {
                Ok(v) => write!(f, "n={} mean={} sd={}", v.n, fmt_real(v.mean), fmt_real(v.sd)),
                Err(_) => write!(f, "n=0"),
            },
            Summary::Membership(m) => write!(f, "in_reference={} of n={}", m.count, m.n),
            Summary::BarChart(b) => write!(
                f,
                "n={} {{{}}}",
                b.n,
                fmt_list(b.categories.iter().zip(&b.counts).map(|(c, k)| format!("{c}: {k}")))
            ),
            Summary::Histogram(h) => write!(
                f,
                "n={} under={} [{}] over={}",
                h.n,
                h.underflow,
                fmt_list(&h.counts),
                h.overflow
            ),
            Summary::Distribution(d) => write!(
                f,
                "n={} p=({})",
                d.n,
                fmt_list(d.p.iter().map(|x| fmt_real(*x)))
            ),
            Summary::Composed(c) => {
                if let Some((lo, hi)) = c.as_interval() {
                    return write!(f, "[{}, {}]", fmt_opt(lo), fmt_opt(hi));
                }
                write!(f, "({})", fmt_list(&c.parts))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(xs: &[f64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::Num(x)).collect()
    }

    fn all_kinds() -> Vec<SummarySpec> {
        vec![
            SummarySpec::Count,
            SummarySpec::Min,
            SummarySpec::Max,
            SummarySpec::Sum,
            SummarySpec::Mean,
            SummarySpec::ExtremeK {
                k: 2,
                order: Order::SmallestFirst,
            },
            SummarySpec::Moments { order: 3 },
            SummarySpec::Membership {
                reference: Reference::Range { lo: 0.0, hi: 4.0 },
            },
            SummarySpec::Histogram {
                edges: vec![0.0, 2.0, 4.0],
            },
            SummarySpec::Distribution {
                support: Support::Bins(vec![0.0, 2.0, 4.0]),
            },
            SummarySpec::interval(),
        ]
    }

    #[test]
    fn count_of_list() {
        let s = summarize(&SummarySpec::Count, &nums(&[3.0, 4.0, 1.0])).unwrap();
        assert_eq!(s, Summary::Count(CountSummary { n: 3 }));
    }

    #[test]
    fn smallest_two_of_list() {
        let spec = SummarySpec::ExtremeK {
            k: 2,
            order: Order::SmallestFirst,
        };
        let Summary::ExtremeK(e) = summarize(&spec, &nums(&[1.0, 3.0, 5.0])).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert_eq!(e.second(), Some(3.0));
    }

    #[test]
    fn smallest_two_merge_matches_union() {
        let spec = SummarySpec::ExtremeK {
            k: 2,
            order: Order::SmallestFirst,
        };
        let a = summarize(&spec, &nums(&[1.0, 3.0, 5.0])).unwrap();
        let b = summarize(&spec, &nums(&[2.0, 5.0, 6.0])).unwrap();
        let m = merge(&a, &b).unwrap();
        let Summary::ExtremeK(e) = &m else { panic!() };
        assert_eq!(e.values, vec![1.0, 2.0]);
        assert_eq!(m, summarize(&spec, &nums(&[1.0, 3.0, 5.0, 2.0, 5.0, 6.0])).unwrap());
    }

    #[test]
    fn empty_is_identity_for_every_kind() {
        let data = nums(&[0.5, 3.0, 1.25, 7.0, -2.0]);
        for spec in all_kinds() {
            let s = summarize(&spec, &data).unwrap();
            let e = spec.empty();
            assert_eq!(merge(&e, &s).unwrap(), s, "{}", spec.name());
            assert_eq!(merge(&s, &e).unwrap(), s, "{}", spec.name());
            assert_eq!(summarize(&spec, &[]).unwrap(), e, "{}", spec.name());
        }
    }

    #[test]
    fn merge_all_examples() {
        let counts: Vec<Summary> = [1, 2, 3]
            .iter()
            .map(|&n| Summary::Count(CountSummary { n }))
            .collect();
        assert_eq!(merge_all(&counts).unwrap(), Summary::Count(CountSummary { n: 6 }));

        let mins: Vec<Summary> = [4.0, 3.0, 9.0]
            .iter()
            .map(|&x| summarize(&SummarySpec::Min, &nums(&[x])).unwrap())
            .collect();
        assert_eq!(
            merge_all(&mins).unwrap(),
            summarize(&SummarySpec::Min, &nums(&[4.0, 3.0, 9.0])).unwrap()
        );

        assert_eq!(merge_all(&counts[..1]).unwrap(), counts[0]);
        assert_eq!(merge_all(&[]), Err(Error::EmptyMerge));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let a = SummarySpec::Count.empty();
        let b = SummarySpec::Sum.empty();
        assert!(matches!(merge(&a, &b), Err(Error::Incompatible { .. })));
        let m1 = SummarySpec::Moments { order: 2 }.empty();
        let m2 = SummarySpec::Moments { order: 3 }.empty();
        assert!(merge(&m1, &m2).is_err());
        let r1 = SummarySpec::Membership {
            reference: Reference::Range { lo: 0.0, hi: 1.0 },
        }
        .empty();
        let r2 = SummarySpec::Membership {
            reference: Reference::Range { lo: 0.0, hi: 2.0 },
        }
        .empty();
        assert!(merge(&r1, &r2).is_err());
    }

    #[test]
    fn summarize_errors() {
        assert!(matches!(
            summarize(&SummarySpec::Sum, &[Value::Num(f64::NAN)]),
            Err(Error::NonFinite(x)) if x.is_nan()
        ));
        assert!(matches!(
            summarize(&SummarySpec::Mean, &[Value::Num(f64::INFINITY)]),
            Err(Error::NonFinite(_))
        ));
        let bars = SummarySpec::BarChart {
            categories: vec!["a".into()],
        };
        assert_eq!(
            summarize(&bars, &[Value::label("z")]),
            Err(Error::UnknownCategory("z".into()))
        );
        let bad = SummarySpec::Histogram {
            edges: vec![1.0, 0.0],
        };
        assert!(matches!(summarize(&bad, &[]), Err(Error::InvalidSpec(_))));
        assert!(matches!(
            summarize(&SummarySpec::ExtremeK { k: 0, order: Order::LargestFirst }, &[]),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn interval_sugar_parses_as_composition() {
        let spec: SummarySpec = serde_json::from_str(r#"{"kind":"interval"}"#).unwrap();
        assert_eq!(spec, SummarySpec::interval());
        assert_eq!(spec.name(), "interval");
    }

    #[test]
    fn exactness_classes() {
        assert!(SummarySpec::Count.is_exact());
        assert!(SummarySpec::interval().is_exact());
        assert!(!SummarySpec::Mean.is_exact());
        assert!(!SummarySpec::Composed {
            parts: vec![SummarySpec::Count, SummarySpec::Sum]
        }
        .is_exact());
    }
}
