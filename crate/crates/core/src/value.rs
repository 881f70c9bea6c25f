//! Measured values and unit identifiers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stable identifier of a unit (row) in a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitId(pub u64);

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The value of one variable on one unit: a real for numeric variables or a
/// label for nominal ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Label(String),
}

impl Value {
    pub fn num(x: f64) -> Value {
        Value::Num(x)
    }

    pub fn label(s: impl Into<String>) -> Value {
        Value::Label(s.into())
    }

    /// The numeric payload, rejecting labels and non-finite reals.
    pub fn as_finite(&self) -> Result<f64> {
        match self {
            Value::Num(x) if x.is_finite() => Ok(*x),
            Value::Num(x) => Err(Error::NonFinite(*x)),
            Value::Label(s) => Err(Error::TypeMismatch {
                expected: "numeric",
                got: format!("label {s:?}"),
            }),
        }
    }

    pub fn as_label(&self) -> Result<&str> {
        match self {
            Value::Label(s) => Ok(s),
            Value::Num(x) => Err(Error::TypeMismatch {
                expected: "categorical",
                got: format!("number {x}"),
            }),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Label(s.to_string())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{}", fmt_real(*x)),
            Value::Label(s) => write!(f, "{s}"),
        }
    }
}

/// One measurement: a value tagged with the unit it was measured on.
///
/// The unit id is only consulted by membership counts over explicit unit-id
/// reference sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub unit: Option<UnitId>,
    pub value: Value,
}

impl Observation {
    pub fn new(unit: UnitId, value: Value) -> Self {
        Observation {
            unit: Some(unit),
            value,
        }
    }

    pub fn anonymous(value: Value) -> Self {
        Observation { unit: None, value }
    }
}

/// Formats integral reals without a trailing `.0`, everything else with the
/// shortest round-trip representation.
pub fn fmt_real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_rejected() {
        assert!(Value::Num(f64::NAN).as_finite().is_err());
        assert!(matches!(
            Value::Num(f64::INFINITY).as_finite(),
            Err(Error::NonFinite(_))
        ));
        assert!(Value::label("a").as_finite().is_err());
        assert_eq!(Value::Num(2.5).as_finite().unwrap(), 2.5);
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(3.0), "3");
        assert_eq!(fmt_real(-4.0), "-4");
        assert_eq!(fmt_real(2.75), "2.75");
    }
}
