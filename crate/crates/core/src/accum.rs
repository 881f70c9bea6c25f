//! Double-double accumulation of real sums.
//!
//! A running sum is kept as an unevaluated pair `hi + lo` with
//! `hi = fl(hi + lo)`. Adding a term or another pair uses error-free
//! transformations, so the pair tracks the exact sum of the terms to about
//! 106 bits. Sums of integer-valued terms below 2^100 are reproduced exactly,
//! independent of summation order, which makes merged and directly computed
//! power sums bit-identical on integer data.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PreciseSum {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl PreciseSum {
    pub const ZERO: PreciseSum = PreciseSum { hi: 0.0, lo: 0.0 };

    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (hi, lo) = fast_two_sum_ordered(hi, lo);
        PreciseSum { hi, lo }
    }

    pub fn of(x: f64) -> Self {
        PreciseSum { hi: x, lo: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = fast_two_sum_ordered(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    pub fn combine(&self, other: &PreciseSum) -> PreciseSum {
        let (s, e) = two_sum(self.hi, other.hi);
        let lo = e + (self.lo + other.lo);
        let (hi, lo) = fast_two_sum_ordered(s, lo);
        PreciseSum { hi, lo }
    }

    /// Nearest f64 to the tracked sum.
    pub fn value(&self) -> f64 {
        self.hi
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn is_finite(&self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// `true` when the pair is in normalized form (`hi = fl(hi + lo)`).
    pub fn is_normalized(&self) -> bool {
        self.hi + self.lo == self.hi
    }
}

fn fast_two_sum_ordered(a: f64, b: f64) -> (f64, f64) {
    if a.abs() >= b.abs() {
        fast_two_sum(a, b)
    } else {
        fast_two_sum(b, a)
    }
}

impl std::iter::FromIterator<f64> for PreciseSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = PreciseSum::ZERO;
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
