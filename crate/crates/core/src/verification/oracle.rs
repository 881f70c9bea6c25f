use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::summary::{Mergeable, Summary, SummarySpec};
use crate::value::{Observation, UnitId, Value};

/// Relative tolerance applied to floating summary kinds. Exact kinds always
/// require bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { relative: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Outcome {
    ExactMatch,
    WithinTolerance {
        max_relative_error: f64,
    },
    Violation {
        merged: Summary,
        recomputed: Summary,
        discrepancy: String,
    },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !matches!(self, Outcome::Violation { .. })
    }

    pub fn relative_error(&self) -> f64 {
        match self {
            Outcome::ExactMatch => 0.0,
            Outcome::WithinTolerance { max_relative_error } => *max_relative_error,
            Outcome::Violation { .. } => f64::INFINITY,
        }
    }
}

/// Result of comparing `merge(Σ(A), Σ(B))` with `Σ(A ++ B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeReport {
    pub kind: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub a: Vec<Value>,
    pub b: Vec<Value>,
}

impl MergeReport {
    pub fn passed(&self) -> bool {
        self.outcome.passed()
    }
}

/// Classifies a merged summary against the recomputed one under the spec's
/// tolerance class.
pub fn classify(spec: &SummarySpec, merged: Summary, recomputed: Summary, tol: Tolerance) -> Outcome {
    if merged == recomputed {
        return Outcome::ExactMatch;
    }
    let violation = |discrepancy: String, merged, recomputed| Outcome::Violation {
        merged,
        recomputed,
        discrepancy,
    };
    if spec.is_exact() {
        return violation("exact kind differs".into(), merged, recomputed);
    }
    match merged.deviation(&recomputed) {
        Some(d) if d <= tol.relative => Outcome::WithinTolerance {
            max_relative_error: d,
        },
        Some(d) => violation(
            format!("relative error {d:e} exceeds {:e}", tol.relative),
            merged,
            recomputed,
        ),
        None => violation("structural mismatch".into(), merged, recomputed),
    }
}

/// Checks the merge law on one split with a caller-supplied merge; used to
/// self-test the harness with deliberately broken merges.
pub fn oracle_check_with<F>(
    spec: &SummarySpec,
    a: &[Observation],
    b: &[Observation],
    tol: Tolerance,
    merge: F,
) -> Result<MergeReport>
where
    F: Fn(&Summary, &Summary) -> Result<Summary>,
{
    let sa = spec.summarize_observations(a)?;
    let sb = spec.summarize_observations(b)?;
    let merged = merge(&sa, &sb)?;
    let union: Vec<Observation> = a.iter().chain(b).cloned().collect();
    let recomputed = spec.summarize_observations(&union)?;
    Ok(MergeReport {
        kind: spec.name().to_string(),
        outcome: classify(spec, merged, recomputed, tol),
        a: a.iter().map(|o| o.value.clone()).collect(),
        b: b.iter().map(|o| o.value.clone()).collect(),
    })
}

pub fn oracle_check(
    spec: &SummarySpec,
    a: &[Observation],
    b: &[Observation],
    tol: Tolerance,
) -> Result<MergeReport> {
    oracle_check_with(spec, a, b, tol, |x, y| x.merge(y))
}

/// [`oracle_check`] over plain value lists; units are numbered `A` first.
pub fn oracle_check_values(
    spec: &SummarySpec,
    a: &[Value],
    b: &[Value],
    tol: Tolerance,
) -> Result<MergeReport> {
    let tag = |offset: usize, vs: &[Value]| -> Vec<Observation> {
        vs.iter()
            .enumerate()
            .map(|(i, v)| Observation::new(UnitId((offset + i) as u64), v.clone()))
            .collect()
    };
    oracle_check(spec, &tag(0, a), &tag(a.len(), b), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summary::CountSummary;

    fn nums(xs: &[f64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::Num(x)).collect()
    }

    #[test]
    fn count_is_exact() {
        let r = oracle_check_values(
            &SummarySpec::Count,
            &nums(&[3.0, 4.0, 1.0]),
            &nums(&[9.0, 6.0]),
            Tolerance::default(),
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::ExactMatch);
    }

    #[test]
    fn moments_within_tolerance() {
        let spec = SummarySpec::Moments { order: 2 };
        let r = oracle_check_values(&spec, &nums(&[1.0, 2.0, 3.0]), &nums(&[5.0]), Tolerance::default()).unwrap();
        assert!(r.passed());
        let Outcome::ExactMatch = r.outcome else {
            // integer data: power sums are exact, so the match is exact too
            panic!("expected exact match, got {:?}", r.outcome);
        };
        let Summary::Moments(m) = spec
            .summarize(&nums(&[1.0, 2.0, 3.0, 5.0]))
            .unwrap()
        else {
            panic!()
        };
        assert!((m.mean_view().unwrap().sd - 2.1875f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn broken_merge_is_caught() {
        let a: Vec<Observation> = nums(&[1.0, 2.0]).into_iter().map(Observation::anonymous).collect();
        let b: Vec<Observation> = nums(&[3.0]).into_iter().map(Observation::anonymous).collect();
        let r = oracle_check_with(&SummarySpec::Count, &a, &b, Tolerance::default(), |x, _| {
            Ok(x.clone())
        })
        .unwrap();
        match r.outcome {
            Outcome::Violation { merged, recomputed, .. } => {
                assert_eq!(merged, Summary::Count(CountSummary { n: 2 }));
                assert_eq!(recomputed, Summary::Count(CountSummary { n: 3 }));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn floating_kind_outside_tolerance() {
        let spec = SummarySpec::Sum;
        let a = spec.summarize(&nums(&[1.0])).unwrap();
        let b = spec.summarize(&nums(&[1.0 + 1e-6])).unwrap();
        let out = classify(&spec, a, b, Tolerance::default());
        assert!(!out.passed());
    }
}
