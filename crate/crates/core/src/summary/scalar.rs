//! Count, extremum, sum and mean summaries.

use serde::{Deserialize, Serialize};

use super::{incompatible, numeric_values, Mergeable};
use crate::accum::PreciseSum;
use crate::error::{Error, Result};
use crate::value::Observation;

/// `|A|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CountSummary {
    pub n: u64,
}

impl CountSummary {
    pub fn summarize(obs: &[Observation]) -> Self {
        CountSummary {
            n: obs.len() as u64,
        }
    }
}

impl Mergeable for CountSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        Ok(CountSummary {
            n: self.n + other.n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    fn pick(self, a: f64, b: f64) -> f64 {
        // total order so signed zeros resolve the same way on every path
        let a_wins = match self {
            Extremum::Min => a.total_cmp(&b).is_le(),
            Extremum::Max => a.total_cmp(&b).is_ge(),
        };
        if a_wins {
            a
        } else {
            b
        }
    }
}

/// Minimum or maximum of a numeric variable; `value` is `None` on the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumSummary {
    pub which: Extremum,
    pub value: Option<f64>,
}

impl ExtremumSummary {
    pub fn empty(which: Extremum) -> Self {
        ExtremumSummary { which, value: None }
    }

    pub fn summarize(which: Extremum, obs: &[Observation]) -> Result<Self> {
        let mut value: Option<f64> = None;
        for x in numeric_values(obs) {
            let x = x?;
            value = Some(match value {
                Some(v) => which.pick(v, x),
                None => x,
            });
        }
        Ok(ExtremumSummary { which, value })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self.value {
            Some(v) if !v.is_finite() => Err(Error::Invariant(format!("{:?} is {v}", self.which))),
            _ => Ok(()),
        }
    }
}

impl Mergeable for ExtremumSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.which != other.which {
            return Err(incompatible(self, other, "min vs max"));
        }
        let value = match (self.value, other.value) {
            (Some(a), Some(b)) => Some(self.which.pick(a, b)),
            (a, None) => a,
            (None, b) => b,
        };
        Ok(ExtremumSummary {
            which: self.which,
            value,
        })
    }
}

/// `Σ_{X∈A} v(X)`, tracked in double-double precision.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SumSummary {
    pub total: PreciseSum,
}

impl SumSummary {
    pub fn summarize(obs: &[Observation]) -> Result<Self> {
        let mut total = PreciseSum::ZERO;
        for x in numeric_values(obs) {
            total.add(x?);
        }
        Ok(SumSummary { total })
    }

    pub fn total(&self) -> f64 {
        self.total.value()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !self.total.is_finite() || !self.total.is_normalized() {
            return Err(Error::Invariant("sum is not a finite normalized pair".into()));
        }
        Ok(())
    }
}

impl Mergeable for SumSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        Ok(SumSummary {
            total: self.total.combine(&other.total),
        })
    }
}

/// `(n_A, μ_A)`; the mean is absent on the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanSummary {
    pub n: u64,
    pub mean: Option<f64>,
}

impl MeanSummary {
    pub fn new(n: u64, mean: f64) -> Result<Self> {
        let s = if n == 0 {
            MeanSummary { n, mean: None }
        } else {
            MeanSummary {
                n,
                mean: Some(mean),
            }
        };
        s.validate()?;
        Ok(s)
    }

    pub fn summarize(obs: &[Observation]) -> Result<Self> {
        let mut total = PreciseSum::ZERO;
        for x in numeric_values(obs) {
            total.add(x?);
        }
        let n = obs.len() as u64;
        let mean = (n > 0).then(|| total.value() / n as f64);
        Ok(MeanSummary { n, mean })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match (self.n, self.mean) {
            (0, None) => Ok(()),
            (0, Some(_)) => Err(Error::Invariant("mean present with n = 0".into())),
            (_, None) => Err(Error::Invariant("mean missing with n > 0".into())),
            (_, Some(m)) if !m.is_finite() => Err(Error::Invariant(format!("mean is {m}"))),
            _ => Ok(()),
        }
    }
}

impl Mergeable for MeanSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        let (a, b) = match (self.mean, other.mean) {
            (Some(a), Some(b)) => (a, b),
            (None, _) => return Ok(*other),
            (_, None) => return Ok(*self),
        };
        let n = self.n + other.n;
        let mean = (self.n as f64 * a + other.n as f64 * b) / n as f64;
        Ok(MeanSummary {
            n,
            mean: Some(mean),
        })
    }
}
