//! Seeded randomized merge-law checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::oracle::{oracle_check_with, MergeReport, Outcome, Tolerance};
use crate::error::Result;
use crate::schema::{Record, Schema};
use crate::summary::{Mergeable, Reference, Summary, Support, SummarySpec, ValueDomain};
use crate::value::{Observation, UnitId, Value};

/// How random datasets are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataGen {
    /// Dataset sizes are uniform in `0..=max_n`.
    pub max_n: usize,
    /// Numeric values are uniform in `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    /// Round numeric values to integers.
    pub integers: bool,
}

impl Default for DataGen {
    fn default() -> Self {
        DataGen {
            max_n: 10_000,
            lo: -1e6,
            hi: 1e6,
            integers: false,
        }
    }
}

fn labels_of(spec: &SummarySpec) -> Option<Vec<String>> {
    match spec {
        SummarySpec::BarChart { categories } => Some(categories.clone()),
        SummarySpec::Distribution {
            support: Support::Categories(k),
        } => Some(k.clone()),
        SummarySpec::Membership {
            reference: Reference::Labels(l),
        } => Some(l.iter().cloned().chain(["other".to_string()]).collect()),
        SummarySpec::Composed { parts } => parts.iter().find_map(labels_of),
        _ => None,
    }
}

impl DataGen {
    /// Draws observations suited to `spec`, with unit ids `0..n`.
    pub fn observations(&self, spec: &SummarySpec, rng: &mut impl Rng) -> Vec<Observation> {
        let n = rng.gen_range(0..=self.max_n);
        let labels = match spec.domain() {
            ValueDomain::Categorical => labels_of(spec),
            _ => None,
        };
        (0..n)
            .map(|i| {
                let value = match &labels {
                    Some(k) => Value::Label(k.choose(rng).expect("non-empty categories").clone()),
                    None => {
                        let x = rng.gen_range(self.lo..=self.hi);
                        Value::Num(if self.integers { x.round() } else { x })
                    }
                };
                Observation::new(UnitId(i as u64), value)
            })
            .collect()
    }
}

/// Splits a list into two disjoint parts by independent coin flips with a
/// random bias, so one side is occasionally empty.
pub fn random_split<T: Clone>(items: &[T], rng: &mut impl Rng) -> (Vec<T>, Vec<T>) {
    let bias: f64 = match rng.gen_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen(),
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for x in items {
        if rng.gen_bool(bias) {
            a.push(x.clone());
        } else {
            b.push(x.clone());
        }
    }
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub kind: String,
    pub trials: usize,
    pub exact: usize,
    pub within_tolerance: usize,
    pub violations: usize,
    pub max_relative_error: f64,
    /// First failing split, if any.
    pub first_violation: Option<MergeReport>,
}

impl TrialSummary {
    fn new(kind: &str) -> Self {
        TrialSummary {
            kind: kind.to_string(),
            trials: 0,
            exact: 0,
            within_tolerance: 0,
            violations: 0,
            max_relative_error: 0.0,
            first_violation: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, report: MergeReport) {
        self.trials += 1;
        match &report.outcome {
            Outcome::ExactMatch => self.exact += 1,
            Outcome::WithinTolerance { max_relative_error } => {
                self.within_tolerance += 1;
                self.max_relative_error = self.max_relative_error.max(*max_relative_error);
            }
            Outcome::Violation { .. } => {
                self.violations += 1;
                if self.first_violation.is_none() {
                    self.first_violation = Some(report);
                }
            }
        }
    }
}

/// Runs `trials` seeded oracle checks of `spec` on random datasets and
/// random disjoint splits.
pub fn random_trials_with<F>(
    spec: &SummarySpec,
    trials: usize,
    seed: u64,
    data: DataGen,
    tol: Tolerance,
    merge: F,
) -> Result<TrialSummary>
where
    F: Fn(&Summary, &Summary) -> Result<Summary>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = TrialSummary::new(spec.name());
    for _ in 0..trials {
        let obs = data.observations(spec, &mut rng);
        let (a, b) = random_split(&obs, &mut rng);
        summary.record(oracle_check_with(spec, &a, &b, tol, &merge)?);
    }
    Ok(summary)
}

pub fn random_trials(
    spec: &SummarySpec,
    trials: usize,
    seed: u64,
    data: DataGen,
    tol: Tolerance,
) -> Result<TrialSummary> {
    random_trials_with(spec, trials, seed, data, tol, |a, b| a.merge(b))
}

/// Oracle checks of every schema variable over `splits` random disjoint
/// splits of a fixed record set.
pub fn verify_records_with<F>(
    schema: &Schema,
    records: &[Record],
    splits: usize,
    seed: u64,
    tol: Tolerance,
    merge: F,
) -> Result<Vec<(String, TrialSummary)>>
where
    F: Fn(&Summary, &Summary) -> Result<Summary>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(String, TrialSummary)> = schema
        .variables
        .iter()
        .map(|v| (v.name.clone(), TrialSummary::new(v.summary.name())))
        .collect();
    let columns: Vec<Vec<Observation>> = (0..schema.variables.len())
        .map(|i| {
            records
                .iter()
                .map(|r| Observation::new(r.unit, r.values[i].clone()))
                .collect()
        })
        .collect();
    for _ in 0..splits {
        let mask: Vec<bool> = {
            let (a, _) = random_split(&(0..records.len()).collect::<Vec<_>>(), &mut rng);
            let mut m = vec![false; records.len()];
            for i in a {
                m[i] = true;
            }
            m
        };
        for (i, var) in schema.variables.iter().enumerate() {
            let (a, b): (Vec<_>, Vec<_>) = columns[i]
                .iter()
                .zip(&mask)
                .partition(|(_, in_a)| **in_a);
            let a: Vec<Observation> = a.into_iter().map(|(o, _)| o.clone()).collect();
            let b: Vec<Observation> = b.into_iter().map(|(o, _)| o.clone()).collect();
            out[i].1.record(oracle_check_with(&var.summary, &a, &b, tol, &merge)?);
        }
    }
    Ok(out)
}
