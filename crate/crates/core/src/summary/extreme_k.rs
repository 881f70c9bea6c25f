use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{incompatible, numeric_values, Mergeable};
use crate::error::{Error, Result};
use crate::value::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    SmallestFirst,
    LargestFirst,
}

impl Order {
    pub fn cmp(self, a: f64, b: f64) -> Ordering {
        match self {
            Order::SmallestFirst => a.total_cmp(&b),
            Order::LargestFirst => b.total_cmp(&a),
        }
    }
}

/// The `k` most extreme values of a numeric variable, as a multiset kept
/// sorted by `order`.
///
/// With `order = SmallestFirst` the stored values are the head of the
/// ascending sort of `v(A)`, so `values[0]` is the 1st and `values[1]` the
/// 2nd value in that sort. `LargestFirst` gives the usual Top-k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeK {
    pub k: usize,
    pub order: Order,
    pub values: Vec<f64>,
}

impl ExtremeK {
    pub fn empty(k: usize, order: Order) -> Self {
        ExtremeK {
            k,
            order,
            values: Vec::new(),
        }
    }

    pub fn summarize(k: usize, order: Order, obs: &[Observation]) -> Result<Self> {
        let mut values = numeric_values(obs).collect::<Result<Vec<f64>>>()?;
        values.sort_by(|a, b| order.cmp(*a, *b));
        values.truncate(k);
        Ok(ExtremeK { k, order, values })
    }

    /// The `i`-th value (1-based) in `order`, if at least `i` units were seen.
    pub fn nth(&self, i: usize) -> Option<f64> {
        i.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn first(&self) -> Option<f64> {
        self.nth(1)
    }

    pub fn second(&self) -> Option<f64> {
        self.nth(2)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Invariant("k must be positive".into()));
        }
        if self.values.len() > self.k {
            return Err(Error::Invariant(format!(
                "{} values stored for k = {}",
                self.values.len(),
                self.k
            )));
        }
        if let Some(x) = self.values.iter().find(|x| !x.is_finite()) {
            return Err(Error::Invariant(format!("non-finite value {x}")));
        }
        if self
            .values
            .windows(2)
            .any(|w| self.order.cmp(w[0], w[1]) == Ordering::Greater)
        {
            return Err(Error::Invariant("values are not sorted".into()));
        }
        Ok(())
    }
}

impl Mergeable for ExtremeK {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.k != other.k || self.order != other.order {
            return Err(incompatible(self, other, "different k or order"));
        }
        let order = self.order;
        let mut values = Vec::with_capacity(self.k);
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.values, &other.values);
        while values.len() < self.k && (i < a.len() || j < b.len()) {
            let take_a = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => order.cmp(*x, *y) != Ordering::Greater,
                (Some(_), None) => true,
                _ => false,
            };
            if take_a {
                values.push(a[i]);
                i += 1;
            } else {
                values.push(b[j]);
                j += 1;
            }
        }
        Ok(ExtremeK {
            k: self.k,
            order,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Value;

    fn obs(xs: &[f64]) -> Vec<Observation> {
        xs.iter().map(|&x| Observation::anonymous(Value::Num(x))).collect()
    }

    #[test]
    fn duplicates_survive_merge() {
        // set semantics would collapse [5, 5] into a single 5
        let a = ExtremeK::summarize(2, Order::LargestFirst, &obs(&[5.0, 5.0])).unwrap();
        let b = ExtremeK::summarize(2, Order::LargestFirst, &obs(&[1.0])).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.values, vec![5.0, 5.0]);
        let direct = ExtremeK::summarize(2, Order::LargestFirst, &obs(&[5.0, 5.0, 1.0])).unwrap();
        assert_eq!(m, direct);
    }

    #[test]
    fn fewer_units_than_k() {
        let a = ExtremeK::summarize(5, Order::SmallestFirst, &obs(&[3.0, 1.0])).unwrap();
        assert_eq!(a.values, vec![1.0, 3.0]);
        assert_eq!(a.nth(3), None);
        assert_eq!(a.nth(0), None);
    }

    #[test]
    fn mismatched_k_rejected() {
        let a = ExtremeK::empty(2, Order::SmallestFirst);
        let b = ExtremeK::empty(3, Order::SmallestFirst);
        assert!(a.merge(&b).is_err());
        let c = ExtremeK::empty(2, Order::LargestFirst);
        assert!(a.merge(&c).is_err());
    }
}
