//! Moment summaries.
//!
//! A moment summary of order `p` stores the size `n` and the raw power sums
//! `S_k = Σ v(X)^k` for `k = 1..=p`. Power sums are additive under disjoint
//! union, so merging is component-wise addition. The `(n, μ, σ)` triple and the
//! central moments are views derived from them; `S_2 = n(σ² + μ²)` links the
//! two representations.

use serde::{Deserialize, Serialize};

use super::{incompatible, numeric_values, Mergeable};
use crate::accum::PreciseSum;
use crate::error::{Error, Result};
use crate::value::Observation;

pub const MAX_MOMENT_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub order: usize,
    pub n: u64,
    /// `sums[k - 1] = S_k`.
    pub sums: Vec<PreciseSum>,
}

/// The `(n, μ, σ)` description of a distribution of values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSd {
    pub n: u64,
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    /// `S = n(σ² + μ²)`.
    pub fn second_power_sum(&self) -> f64 {
        self.n as f64 * (self.sd * self.sd + self.mean * self.mean)
    }

    /// Merges two triples directly: sizes add, means combine by size weights
    /// and `σ_C = √(S_C/n_C − μ_C²)` with `S_C = S_A + S_B`.
    pub fn merge(&self, other: &MeanSd) -> MeanSd {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let nf = n as f64;
        let mean = (self.n as f64 * self.mean + other.n as f64 * other.mean) / nf;
        let s = self.second_power_sum() + other.second_power_sum();
        let sd = (s / nf - mean * mean).max(0.0).sqrt();
        MeanSd { n, mean, sd }
    }
}

fn powers(x: f64, order: usize) -> impl Iterator<Item = f64> {
    let mut p = 1.0;
    (0..order).map(move |_| {
        p *= x;
        p
    })
}

impl MomentSummary {
    pub fn empty(order: usize) -> Self {
        MomentSummary {
            order,
            n: 0,
            sums: vec![PreciseSum::ZERO; order],
        }
    }

    pub fn summarize(order: usize, obs: &[Observation]) -> Result<Self> {
        let mut s = MomentSummary::empty(order);
        for x in numeric_values(obs) {
            let x = x?;
            for (acc, p) in s.sums.iter_mut().zip(powers(x, order)) {
                acc.add(p);
            }
            s.n += 1;
        }
        Ok(s)
    }

    /// Builds an order-p summary from plain power sums `S_1..S_p`.
    pub fn from_power_sums(n: u64, sums: &[f64]) -> Result<Self> {
        let s = MomentSummary {
            order: sums.len(),
            n,
            sums: sums.iter().map(|&x| PreciseSum::of(x)).collect(),
        };
        s.validate()?;
        Ok(s)
    }

    /// Order-2 summary from an `(n, μ, σ)` triple.
    pub fn from_mean_sd(t: MeanSd) -> Result<Self> {
        if t.n == 0 {
            return Ok(MomentSummary::empty(2));
        }
        let n = t.n as f64;
        MomentSummary::from_power_sums(t.n, &[n * t.mean, t.second_power_sum()])
    }

    /// `S_k`; `S_0 = n`.
    pub fn power_sum(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return Some(self.n as f64);
        }
        self.sums.get(k - 1).map(PreciseSum::value)
    }

    pub fn mean_view(&self) -> Result<MeanSd> {
        if self.n == 0 {
            return Err(Error::EmptySummary("mean_view"));
        }
        let n = self.n as f64;
        let mean = self.sums[0].value() / n;
        let var = self.sums[1].value() / n - mean * mean;
        Ok(MeanSd {
            n: self.n,
            mean,
            sd: var.max(0.0).sqrt(),
        })
    }

    /// `(1/n) Σ (v − μ)^r`, expanded over the power sums.
    pub fn central_moment(&self, r: usize) -> Result<f64> {
        if r < 2 || r > self.order {
            return Err(Error::MomentOrder {
                requested: r,
                max: self.order,
            });
        }
        if self.n == 0 {
            return Err(Error::EmptySummary("central_moment"));
        }
        let n = self.n as f64;
        let neg_mean = -(self.sums[0].value() / n);
        let mut acc = PreciseSum::ZERO;
        let mut binom = 1.0;
        for j in 0..=r {
            let raw = if j == 0 { 1.0 } else { self.sums[j - 1].value() / n };
            acc.add(binom * neg_mean.powi((r - j) as i32) * raw);
            binom = binom * (r - j) as f64 / (j + 1) as f64;
        }
        Ok(acc.value())
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.order < 2 || self.order > MAX_MOMENT_ORDER {
            return Err(Error::Invariant(format!("moment order {}", self.order)));
        }
        if self.sums.len() != self.order {
            return Err(Error::Invariant(format!(
                "{} power sums for order {}",
                self.sums.len(),
                self.order
            )));
        }
        if self.sums.iter().any(|s| !s.is_finite() || !s.is_normalized()) {
            return Err(Error::Invariant("power sums must be finite normalized pairs".into()));
        }
        if self.n == 0 {
            if self.sums.iter().any(|s| s.value() != 0.0) {
                return Err(Error::Invariant("non-zero power sum with n = 0".into()));
            }
            return Ok(());
        }
        let n = self.n as f64;
        let second = self.sums[1].value() / n;
        let mean = self.sums[0].value() / n;
        let var = second - mean * mean;
        if var < -1e-9 * second.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Invariant(format!("negative variance {var}")));
        }
        Ok(())
    }
}

impl Mergeable for MomentSummary {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(incompatible(self, other, "different moment order"));
        }
        Ok(MomentSummary {
            order: self.order,
            n: self.n + other.n,
            sums: self
                .sums
                .iter()
                .zip(&other.sums)
                .map(|(a, b)| a.combine(b))
                .collect(),
        })
    }
}
