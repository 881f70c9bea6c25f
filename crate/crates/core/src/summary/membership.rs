use serde::{Deserialize, Serialize};

use super::{incompatible, Mergeable};
use crate::error::{Error, Result};
use crate::value::{Observation, UnitId, Value};

/// A reference set `C` of units, given either as a predicate on the measured
/// value or as an explicit set of unit ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Units whose value lies in `[lo, hi)`.
    Range { lo: f64, hi: f64 },
    /// Units whose label is one of these (sorted, distinct).
    Labels(Vec<String>),
    /// Units with these ids (sorted, distinct).
    Units(Vec<UnitId>),
}

impl Reference {
    pub fn labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = labels.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Reference::Labels(v)
    }

    pub fn units<I: IntoIterator<Item = UnitId>>(ids: I) -> Self {
        let mut v: Vec<UnitId> = ids.into_iter().collect();
        v.sort();
        v.dedup();
        Reference::Units(v)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Reference::Range { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::InvalidSpec(format!("reference range [{lo}, {hi})")));
                }
            }
            Reference::Labels(v) => {
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidSpec("reference labels must be sorted and distinct".into()));
                }
            }
            Reference::Units(v) => {
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidSpec("reference unit ids must be sorted and distinct".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, obs: &Observation) -> Result<bool> {
        match self {
            Reference::Range { lo, hi } => {
                let x = obs.value.as_finite()?;
                Ok(*lo <= x && x < *hi)
            }
            Reference::Labels(labels) => match &obs.value {
                Value::Label(l) => Ok(labels.binary_search(l).is_ok()),
                Value::Num(x) => Err(Error::TypeMismatch {
                    expected: "categorical",
                    got: format!("number {x}"),
                }),
            },
            Reference::Units(ids) => {
                if let Value::Num(x) = obs.value {
                    if !x.is_finite() {
                        return Err(Error::NonFinite(x));
                    }
                }
                let id = obs.unit.ok_or(Error::UnitIdsRequired)?;
                Ok(ids.binary_search(&id).is_ok())
            }
        }
    }
}

/// `n(A; C) = |A ∩ C|`, together with `n = |A|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipCount {
    pub reference: Reference,
    pub n: u64,
    pub count: u64,
}

impl MembershipCount {
    pub fn empty(reference: Reference) -> Self {
        MembershipCount {
            reference,
            n: 0,
            count: 0,
        }
    }

    pub fn summarize(reference: &Reference, obs: &[Observation]) -> Result<Self> {
        let mut count = 0;
        for o in obs {
            if reference.contains(o)? {
                count += 1;
            }
        }
        Ok(MembershipCount {
            reference: reference.clone(),
            n: obs.len() as u64,
            count,
        })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        self.reference.validate()?;
        if self.count > self.n {
            return Err(Error::Invariant(format!(
                "membership count {} exceeds n = {}",
                self.count, self.n
            )));
        }
        Ok(())
    }
}

impl Mergeable for MembershipCount {
    fn merge(&self, other: &Self) -> Result<Self> {
        if self.reference != other.reference {
            return Err(incompatible(self, other, "different reference sets"));
        }
        Ok(MembershipCount {
            reference: self.reference.clone(),
            n: self.n + other.n,
            count: self.count + other.count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_reference_needs_ids() {
        let r = Reference::units([UnitId(2), UnitId(1)]);
        assert_eq!(r, Reference::Units(vec![UnitId(1), UnitId(2)]));
        let anon = [Observation::anonymous(Value::Num(1.0))];
        assert_eq!(
            MembershipCount::summarize(&r, &anon),
            Err(Error::UnitIdsRequired)
        );
        let tagged = [
            Observation::new(UnitId(1), Value::Num(0.0)),
            Observation::new(UnitId(3), Value::Num(0.0)),
        ];
        let m = MembershipCount::summarize(&r, &tagged).unwrap();
        assert_eq!((m.n, m.count), (2, 1));
    }

    #[test]
    fn range_is_half_open() {
        let r = Reference::Range { lo: 0.0, hi: 1.0 };
        let obs: Vec<_> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&x| Observation::anonymous(Value::Num(x)))
            .collect();
        assert_eq!(MembershipCount::summarize(&r, &obs).unwrap().count, 2);
    }
}
