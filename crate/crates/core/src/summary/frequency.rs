//! Frequency summaries: bar charts over a declared category set, histograms
//! over declared bins, and their normalized `(n, p)` form.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{incompatible, Mergeable};
use crate::error::{Error, Result};
use crate::value::Observation;

/// Distinct, non-empty category set in declaration order.
pub(crate) fn validate_categories(categories: &[String]) -> Result<()> {
    if categories.is_empty() {
        return Err(Error::InvalidSpec("category set is empty".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for c in categories {
        if !seen.insert(c) {
            return Err(Error::InvalidSpec(format!("duplicate category {c:?}")));
        }
    }
    Ok(())
}

pub(crate) fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InvalidSpec("histogram needs at least two edges".into()));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidSpec("histogram edges must be finite".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec("histogram edges must be strictly increasing".into()));
    }
    Ok(())
}

fn same_edges(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarChart {
    pub categories: Vec<String>,
    /// `counts[i]` is the number of units labelled `categories[i]`.
    pub counts: Vec<u64>,
    pub n: u64,
}

impl BarChart {
    pub fn empty(categories: Vec<String>) -> Self {
        let counts = vec![0; categories.len()];
        BarChart {
            categories,
            counts,
            n: 0,
        }
    }

    pub fn summarize(categories: &[String], obs: &[Observation]) -> Result<Self> {
        let index: HashMap<&str, usize> = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut chart = BarChart::empty(categories.to_vec());
        for o in obs {
            let label = o.value.as_label()?;
            let i = *index
                .get(label)
                .ok_or_else(|| Error::UnknownCategory(label.to_string()))?;
            chart.counts[i] += 1;
        }
        chart.n = obs.len() as u64;
        Ok(chart)
    }

    pub fn count(&self, label: &str) -> Option<u64> {
        self.categories
            .iter()
            .position(|c| c == label)
            .map(|i| self.counts[i])
    }

    pub(crate) fn validate(&self) -> Result<()> {
        validate_categories(&self.categories)?;
        if self.counts.len() != self.categories.len() {
            return Err(Error::Invariant("one count per category required".into()));
        }
        if self.counts.iter().sum::<u64>() != self.n {
            return Err(Error::Invariant("bar chart counts do not sum to n".into()));
        }
        Ok(())
    }
}

impl Mergeable for BarChart {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.categories != other.categories {
            return Err(incompatible(self, other, "different category sets"));
        }
        Ok(BarChart {
            categories: self.categories.clone(),
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            n: self.n + other.n,
        })
    }
}

/// Counts over bins `[e_i, e_{i+1})`, the last bin closed, plus explicit
/// underflow and overflow cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub n: u64,
}

/// Where a value lands relative to a set of bin edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cell {
    Under,
    Bin(usize),
    Over,
}

pub(crate) fn locate(edges: &[f64], x: f64) -> Cell {
    let last = edges.len() - 1;
    if x < edges[0] {
        Cell::Under
    } else if x > edges[last] {
        Cell::Over
    } else if x == edges[last] {
        Cell::Bin(last - 1)
    } else {
        Cell::Bin(edges.partition_point(|&e| e <= x) - 1)
    }
}

impl Histogram {
    pub fn empty(edges: Vec<f64>) -> Self {
        let bins = edges.len().saturating_sub(1);
        Histogram {
            edges,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
            n: 0,
        }
    }

    pub fn summarize(edges: &[f64], obs: &[Observation]) -> Result<Self> {
        validate_edges(edges)?;
        let mut h = Histogram::empty(edges.to_vec());
        for o in obs {
            match locate(edges, o.value.as_finite()?) {
                Cell::Under => h.underflow += 1,
                Cell::Over => h.overflow += 1,
                Cell::Bin(i) => h.counts[i] += 1,
            }
        }
        h.n = obs.len() as u64;
        Ok(h)
    }

    /// Rebuilds a histogram from a frequency vector laid out as
    /// `[underflow, bins.., overflow]`.
    pub fn from_frequencies(edges: Vec<f64>, freqs: &[u64]) -> Result<Self> {
        validate_edges(&edges)?;
        if freqs.len() != edges.len() + 1 {
            return Err(Error::Invariant(format!(
                "{} frequencies for {} cells",
                freqs.len(),
                edges.len() + 1
            )));
        }
        let last = freqs.len() - 1;
        Ok(Histogram {
            counts: freqs[1..last].to_vec(),
            underflow: freqs[0],
            overflow: freqs[last],
            n: freqs.iter().sum(),
            edges,
        })
    }

    /// Frequencies over `[underflow, bins.., overflow]`.
    pub fn frequencies(&self) -> Vec<u64> {
        let mut f = Vec::with_capacity(self.counts.len() + 2);
        f.push(self.underflow);
        f.extend_from_slice(&self.counts);
        f.push(self.overflow);
        f
    }

    pub(crate) fn validate(&self) -> Result<()> {
        validate_edges(&self.edges)
            .map_err(|e| Error::Invariant(e.to_string()))?;
        if self.counts.len() != self.edges.len() - 1 {
            return Err(Error::Invariant("one count per bin required".into()));
        }
        if self.underflow + self.overflow + self.counts.iter().sum::<u64>() != self.n {
            return Err(Error::Invariant("histogram counts do not sum to n".into()));
        }
        Ok(())
    }
}

impl Mergeable for Histogram {
    fn merge(&self, other: &Self) -> Result<Self> {
        if !same_edges(&self.edges, &other.edges) {
            return Err(incompatible(self, other, "different bin edges"));
        }
        Ok(Histogram {
            edges: self.edges.clone(),
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            underflow: self.underflow + other.underflow,
            overflow: self.overflow + other.overflow,
            n: self.n + other.n,
        })
    }
}

/// Ordered support of a discrete distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Cells `[underflow, bins.., overflow]` of a histogram with these edges.
    Bins(Vec<f64>),
    Categories(Vec<String>),
}

impl Support {
    pub fn cells(&self) -> usize {
        match self {
            Support::Bins(edges) => edges.len() + 1,
            Support::Categories(k) => k.len(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Support::Bins(edges) => validate_edges(edges),
            Support::Categories(k) => validate_categories(k),
        }
    }

    fn same(&self, other: &Support) -> bool {
        match (self, other) {
            (Support::Bins(a), Support::Bins(b)) => same_edges(a, b),
            (Support::Categories(a), Support::Categories(b)) => a == b,
            _ => false,
        }
    }
}

/// `(n, p)`: the size of the summarized set and its empirical distribution.
/// The empty set is `n = 0` with `p` all zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    pub support: Support,
    pub n: u64,
    pub p: Vec<f64>,
}

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;
const FREQUENCY_TOLERANCE: f64 = 1e-9;

impl DiscreteDistribution {
    pub fn empty(support: Support) -> Self {
        let cells = support.cells();
        DiscreteDistribution {
            support,
            n: 0,
            p: vec![0.0; cells],
        }
    }

    pub fn new(support: Support, n: u64, p: Vec<f64>) -> Result<Self> {
        let d = DiscreteDistribution { support, n, p };
        d.validate()?;
        Ok(d)
    }

    pub fn from_frequencies(support: Support, freqs: &[u64]) -> Result<Self> {
        if freqs.len() != support.cells() {
            return Err(Error::Invariant(format!(
                "{} frequencies for {} cells",
                freqs.len(),
                support.cells()
            )));
        }
        let n: u64 = freqs.iter().sum();
        if n == 0 {
            return Ok(DiscreteDistribution::empty(support));
        }
        let p = freqs.iter().map(|&f| f as f64 / n as f64).collect();
        Ok(DiscreteDistribution { support, n, p })
    }

    pub fn summarize(support: &Support, obs: &[Observation]) -> Result<Self> {
        let freqs = match support {
            Support::Bins(edges) => Histogram::summarize(edges, obs)?.frequencies(),
            Support::Categories(k) => BarChart::summarize(k, obs)?.counts,
        };
        DiscreteDistribution::from_frequencies(support.clone(), &freqs)
    }

    /// Recovers the frequency vector `f_i = round(n p_i)`.
    pub fn frequencies(&self) -> Result<Vec<u64>> {
        let n = self.n as f64;
        let mut out = Vec::with_capacity(self.p.len());
        for (index, &p) in self.p.iter().enumerate() {
            let value = n * p;
            let rounded = value.round();
            if (value - rounded).abs() > FREQUENCY_TOLERANCE || rounded < 0.0 {
                return Err(Error::NonIntegralFrequency { index, value });
            }
            out.push(rounded as u64);
        }
        if out.iter().sum::<u64>() != self.n {
            return Err(Error::Invariant("frequencies do not sum to n".into()));
        }
        Ok(out)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        self.support
            .validate()
            .map_err(|e| Error::Invariant(e.to_string()))?;
        if self.p.len() != self.support.cells() {
            return Err(Error::Invariant("one probability per support cell required".into()));
        }
        if self.p.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Invariant("probabilities must be finite and non-negative".into()));
        }
        if self.n == 0 {
            if self.p.iter().any(|&p| p != 0.0) {
                return Err(Error::Invariant("empty distribution must have zero p".into()));
            }
            return Ok(());
        }
        let total: f64 = self.p.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::Invariant(format!("probabilities sum to {total}")));
        }
        Ok(())
    }
}

impl Mergeable for DiscreteDistribution {
    fn merge(&self, other: &Self) -> Result<Self> {
        if !self.support.same(&other.support) {
            return Err(incompatible(self, other, "different supports"));
        }
        if self.n == 0 {
            return Ok(other.clone());
        }
        if other.n == 0 {
            return Ok(self.clone());
        }
        let n = self.n + other.n;
        let (na, nb, nc) = (self.n as f64, other.n as f64, n as f64);
        let p = self
            .p
            .iter()
            .zip(&other.p)
            .map(|(pa, pb)| (na * pa + nb * pb) / nc)
            .collect();
        Ok(DiscreteDistribution {
            support: self.support.clone(),
            n,
            p,
        })
    }
}

/// Either frequency summary that normalizes into `(n, p)`.
pub enum Frequencies<'a> {
    Histogram(&'a Histogram),
    BarChart(&'a BarChart),
}

impl<'a> From<&'a Histogram> for Frequencies<'a> {
    fn from(h: &'a Histogram) -> Self {
        Frequencies::Histogram(h)
    }
}

impl<'a> From<&'a BarChart> for Frequencies<'a> {
    fn from(b: &'a BarChart) -> Self {
        Frequencies::BarChart(b)
    }
}

/// `p = f / n` over the ordered support of a histogram or bar chart.
pub fn to_distribution<'a>(f: impl Into<Frequencies<'a>>) -> Result<DiscreteDistribution> {
    let (support, freqs) = match f.into() {
        Frequencies::Histogram(h) => (Support::Bins(h.edges.clone()), h.frequencies()),
        Frequencies::BarChart(b) => (Support::Categories(b.categories.clone()), b.counts.clone()),
    };
    if freqs.iter().all(|&f| f == 0) {
        return Err(Error::EmptySummary("to_distribution"));
    }
    DiscreteDistribution::from_frequencies(support, &freqs)
}

/// `f_i = round(n p_i)`; fails when an implied frequency is not integral.
pub fn from_distribution(d: &DiscreteDistribution) -> Result<Vec<u64>> {
    d.frequencies()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Value;

    fn nums(xs: &[f64]) -> Vec<Observation> {
        xs.iter().map(|&x| Observation::anonymous(Value::Num(x))).collect()
    }

    fn labels(xs: &[&str]) -> Vec<Observation> {
        xs.iter().map(|&x| Observation::anonymous(Value::label(x))).collect()
    }

    fn cats(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn histogram_bins_are_half_open_with_closed_last_bin() {
        let h = Histogram::summarize(&[0.0, 1.0, 2.0], &nums(&[-0.5, 0.0, 0.99, 1.0, 2.0, 2.5])).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!((h.underflow, h.overflow, h.n), (1, 1, 6));
    }

    #[test]
    fn histogram_rejects_bad_edges() {
        for edges in [vec![0.0], vec![1.0, 1.0], vec![2.0, 1.0], vec![0.0, f64::NAN]] {
            assert!(matches!(
                Histogram::summarize(&edges, &[]),
                Err(Error::InvalidSpec(_))
            ));
        }
    }

    #[test]
    fn histogram_merge_requires_identical_edges() {
        let a = Histogram::empty(vec![0.0, 1.0]);
        let b = Histogram::empty(vec![0.0, 2.0]);
        assert!(matches!(a.merge(&b), Err(Error::Incompatible { .. })));
    }

    #[test]
    fn bar_chart_unknown_label() {
        let err = BarChart::summarize(&cats(&["a", "b"]), &labels(&["a", "c"])).unwrap_err();
        assert_eq!(err, Error::UnknownCategory("c".into()));
    }

    #[test]
    fn bar_chart_merge_requires_same_categories() {
        let a = BarChart::empty(cats(&["a", "b"]));
        let b = BarChart::empty(cats(&["b", "a"]));
        assert!(a.merge(&b).is_err());
        assert_eq!(a.merge(&a).unwrap(), a);
    }

    #[test]
    fn distribution_examples() {
        let support = Support::Categories(cats(&["x", "y"]));
        let b = BarChart::summarize(&cats(&["x", "y"]), &labels(&["x", "y", "x", "y"])).unwrap();
        let d = to_distribution(&b).unwrap();
        assert_eq!(d.p, vec![0.5, 0.5]);
        assert_eq!(d.n, 4);
        assert_eq!(from_distribution(&d).unwrap(), vec![2, 2]);

        let point = DiscreteDistribution::from_frequencies(Support::Categories(cats(&["a", "b", "c"])), &[5, 0, 0]).unwrap();
        assert_eq!(point.p, vec![1.0, 0.0, 0.0]);

        let a = DiscreteDistribution::new(support.clone(), 3, vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let b = DiscreteDistribution::new(support.clone(), 1, vec![1.0, 0.0]).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.n, 4);
        for (got, want) in m.p.iter().zip([0.5, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(from_distribution(&m).unwrap(), vec![2, 2]);
    }

    #[test]
    fn empty_frequency_summary_has_no_distribution() {
        let h = Histogram::empty(vec![0.0, 1.0]);
        assert!(matches!(to_distribution(&h), Err(Error::EmptySummary(_))));
    }

    #[test]
    fn histogram_round_trips_through_distribution() {
        let h = Histogram::summarize(&[0.0, 1.0, 2.0, 3.0], &nums(&[-1.0, 0.5, 1.5, 1.7, 2.2, 3.0, 9.0])).unwrap();
        let d = to_distribution(&h).unwrap();
        let f = from_distribution(&d).unwrap();
        assert_eq!(f, h.frequencies());
        assert_eq!(Histogram::from_frequencies(h.edges.clone(), &f).unwrap(), h);
    }

    #[test]
    fn non_integral_frequency_rejected() {
        let d = DiscreteDistribution::new(Support::Categories(cats(&["a", "b"])), 3, vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            from_distribution(&d),
            Err(Error::NonIntegralFrequency { .. })
        ));
    }

    #[test]
    fn distribution_rejects_bad_probabilities() {
        let support = Support::Categories(cats(&["a", "b"]));
        assert!(DiscreteDistribution::new(support.clone(), 2, vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(support.clone(), 2, vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(support, 0, vec![0.5, 0.5]).is_err());
    }
}
