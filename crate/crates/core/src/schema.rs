//! Record schemas: declared variables, their value types and the summary
//! computed for each.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summary::{Reference, Support, SummarySpec, ValueDomain};
use crate::value::{UnitId, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VariableType {
    Numeric,
    Categorical { labels: Vec<String> },
    Binned { edges: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    #[serde(flatten)]
    pub ty: VariableType,
    pub summary: SummarySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    /// Column holding explicit unit ids; rows are numbered from 1 otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_column: Option<String>,
    pub variables: Vec<VariableSpec>,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, ty: VariableType, summary: SummarySpec) -> Self {
        VariableSpec {
            name: name.into(),
            ty,
            summary,
        }
    }

    fn check_summary(&self, spec: &SummarySpec) -> Result<()> {
        let err = |msg: String| Err(Error::Schema(format!("variable {:?}: {msg}", self.name)));
        match (&self.ty, spec) {
            (_, SummarySpec::Composed { parts }) => {
                return parts.iter().try_for_each(|p| self.check_summary(p))
            }
            (VariableType::Categorical { labels }, SummarySpec::BarChart { categories })
            | (
                VariableType::Categorical { labels },
                SummarySpec::Distribution {
                    support: Support::Categories(categories),
                },
            ) if labels != categories => {
                return err("category set differs from the declared labels".into())
            }
            (VariableType::Categorical { labels }, SummarySpec::Membership { reference: Reference::Labels(refs) })
                if refs.iter().any(|r| !labels.contains(r)) =>
            {
                return err("reference labels outside the declared labels".into())
            }
            (VariableType::Binned { edges }, SummarySpec::Histogram { edges: h })
            | (
                VariableType::Binned { edges },
                SummarySpec::Distribution {
                    support: Support::Bins(h),
                },
            ) if edges != h => return err("bin edges differ from the declared edges".into()),
            _ => {}
        }
        let ok = matches!(
            (spec.domain(), &self.ty),
            (ValueDomain::Any, _)
                | (ValueDomain::Numeric, VariableType::Numeric | VariableType::Binned { .. })
                | (ValueDomain::Categorical, VariableType::Categorical { .. })
        );
        if !ok {
            return err(format!("{} summary does not apply to this variable type", spec.name()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match &self.ty {
            VariableType::Numeric => {}
            VariableType::Categorical { labels } => Support::Categories(labels.clone())
                .validate()
                .map_err(|e| Error::Schema(format!("variable {:?}: {e}", self.name)))?,
            VariableType::Binned { edges } => Support::Bins(edges.clone())
                .validate()
                .map_err(|e| Error::Schema(format!("variable {:?}: {e}", self.name)))?,
        }
        self.summary
            .validate()
            .map_err(|e| Error::Schema(format!("variable {:?}: {e}", self.name)))?;
        self.check_summary(&self.summary)
    }

    /// Checks that a parsed value has the variable's declared type.
    pub fn check_value(&self, v: &Value) -> Result<()> {
        match (&self.ty, v) {
            (VariableType::Numeric | VariableType::Binned { .. }, Value::Num(x)) => {
                if x.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonFinite(*x))
                }
            }
            (VariableType::Categorical { labels }, Value::Label(l)) => {
                if labels.contains(l) {
                    Ok(())
                } else {
                    Err(Error::UnknownCategory(l.clone()))
                }
            }
            (VariableType::Categorical { .. }, Value::Num(x)) => Err(Error::TypeMismatch {
                expected: "categorical",
                got: format!("number {x}"),
            }),
            (_, Value::Label(l)) => Err(Error::TypeMismatch {
                expected: "numeric",
                got: format!("label {l:?}"),
            }),
        }
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self.ty, VariableType::Categorical { .. })
    }
}

impl Schema {
    pub fn new(variables: Vec<VariableSpec>) -> Self {
        Schema {
            id_column: None,
            variables,
        }
    }

    pub fn with_id_column(mut self, name: impl Into<String>) -> Self {
        self.id_column = Some(name.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::Schema("no variables declared".into()));
        }
        let mut seen = HashSet::new();
        for v in &self.variables {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::Schema(format!("duplicate variable {:?}", v.name)));
            }
            v.validate()?;
        }
        if let Some(id) = &self.id_column {
            if seen.contains(id.as_str()) {
                return Err(Error::Schema(format!("id column {id:?} is also a variable")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: Schema =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }
}

/// One unit with the values of every schema variable, in schema order.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub unit: UnitId,
    pub values: Vec<Value>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_schema_document() {
        let text = r#"{
            "id_column": "id",
            "variables": [
                {"name": "age", "type": "numeric", "summary": {"kind": "moments", "order": 2}},
                {"name": "region", "type": "categorical", "labels": ["n", "s"],
                 "summary": {"kind": "bar_chart", "categories": ["n", "s"]}},
                {"name": "score", "type": "binned", "edges": [0, 5, 10],
                 "summary": {"kind": "histogram", "edges": [0, 5, 10]}}
            ]
        }"#;
        let s = Schema::from_json(text).unwrap();
        assert_eq!(s.id_column.as_deref(), Some("id"));
        assert_eq!(s.variables.len(), 3);
        assert_eq!(s.position("score"), Some(2));
    }

    #[test]
    fn rejects_mismatched_summary() {
        let v = VariableSpec::new(
            "region",
            VariableType::Categorical {
                labels: vec!["a".into()],
            },
            SummarySpec::Mean,
        );
        assert!(matches!(Schema::new(vec![v]).validate(), Err(Error::Schema(_))));

        let v = VariableSpec::new(
            "region",
            VariableType::Categorical {
                labels: vec!["a".into(), "b".into()],
            },
            SummarySpec::BarChart {
                categories: vec!["a".into()],
            },
        );
        assert!(Schema::new(vec![v]).validate().is_err());

        let v = VariableSpec::new(
            "x",
            VariableType::Binned {
                edges: vec![0.0, 1.0],
            },
            SummarySpec::Histogram {
                edges: vec![0.0, 2.0],
            },
        );
        assert!(Schema::new(vec![v]).validate().is_err());
    }

    #[test]
    fn duplicate_variables_rejected() {
        let v = VariableSpec::new("x", VariableType::Numeric, SummarySpec::Count);
        assert!(Schema::new(vec![v.clone(), v]).validate().is_err());
    }
}
