//! Loading unit-level records from CSV or JSON-lines files and splitting them
//! into disjoint partitions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::schema::{Record, Schema, VariableType};
use crate::value::{fmt_real, UnitId, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "jsonl" | "ndjson" => Some(Format::Jsonl),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(Error::Schema(format!("unknown data format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub schema: Schema,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn new(schema: Schema, records: Vec<Record>) -> Result<Self> {
        schema.validate()?;
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(r.unit) {
                return Err(Error::DuplicateUnit(r.unit.0));
            }
            if r.values.len() != schema.variables.len() {
                return Err(Error::Schema(format!("unit {} has the wrong number of values", r.unit)));
            }
            for (var, v) in schema.variables.iter().zip(&r.values) {
                var.check_value(v)?;
            }
        }
        Ok(Dataset { schema, records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionId(pub String);

impl fmt::Display for PartitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub id: PartitionId,
    pub records: Vec<Record>,
}

impl Partition {
    pub fn unit_ids(&self) -> Vec<UnitId> {
        self.records.iter().map(|r| r.unit).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitStrategy {
    RoundRobin(usize),
    Contiguous(usize),
    ByColumn(String),
}

impl FromStr for SplitStrategy {
    type Err = Error;

    /// `round-robin:K`, `contiguous:K` or `by-column:NAME`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Split(format!("expected STRATEGY:ARG, got {s:?}")))?;
        let k = || {
            arg.parse::<usize>()
                .map_err(|_| Error::Split(format!("bad partition count {arg:?}")))
        };
        match name {
            "round-robin" => Ok(SplitStrategy::RoundRobin(k()?)),
            "contiguous" => Ok(SplitStrategy::Contiguous(k()?)),
            "by-column" => Ok(SplitStrategy::ByColumn(arg.to_string())),
            _ => Err(Error::Split(format!("unknown strategy {name:?}"))),
        }
    }
}

fn parse_field(schema: &Schema, var: usize, raw: &str, row: usize) -> Result<Value> {
    let spec = &schema.variables[var];
    let located = |message: String| Error::Parse {
        row,
        column: spec.name.clone(),
        message,
    };
    if raw.is_empty() {
        return Err(located("missing value".into()));
    }
    let value = match spec.ty {
        VariableType::Categorical { .. } => Value::Label(raw.to_string()),
        _ => Value::Num(
            raw.trim()
                .parse::<f64>()
                .map_err(|_| located(format!("{raw:?} is not a number")))?,
        ),
    };
    spec.check_value(&value).map_err(|e| located(e.to_string()))?;
    Ok(value)
}

fn parse_id(raw: &str, row: usize, column: &str) -> Result<UnitId> {
    raw.trim().parse::<u64>().map(UnitId).map_err(|_| Error::Parse {
        row,
        column: column.to_string(),
        message: format!("{raw:?} is not a unit id"),
    })
}

fn check_header(schema: &Schema, header: &[String]) -> Result<HashMap<String, usize>> {
    let mut columns = HashMap::new();
    for (i, h) in header.iter().enumerate() {
        if columns.insert(h.clone(), i).is_some() {
            return Err(Error::Schema(format!("duplicate column {h:?}")));
        }
    }
    let expected: HashSet<&str> = schema
        .variables
        .iter()
        .map(|v| v.name.as_str())
        .chain(schema.id_column.as_deref())
        .collect();
    for name in &expected {
        if !columns.contains_key(*name) {
            return Err(Error::Schema(format!("missing column {name:?}")));
        }
    }
    if let Some(extra) = header.iter().find(|h| !expected.contains(h.as_str())) {
        return Err(Error::Schema(format!("unexpected column {extra:?}")));
    }
    Ok(columns)
}

/// Parses CSV text: comma separated, header row first, optional double
/// quotes. Rows are numbered from 1 after the header.
pub fn parse_csv(text: &str, schema: &Schema) -> Result<Dataset> {
    schema.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("bad CSV header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let columns = check_header(schema, &header)?;
    let positions: Vec<usize> = schema.variables.iter().map(|v| columns[&v.name]).collect();
    let id_pos = schema.id_column.as_ref().map(|c| (c.as_str(), columns[c]));

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Parse {
            row: row_no,
            column: String::new(),
            message: e.to_string(),
        })?;
        let values = positions
            .iter()
            .enumerate()
            .map(|(var, &pos)| parse_field(schema, var, &row[pos], row_no))
            .collect::<Result<Vec<_>>>()?;
        let unit = match id_pos {
            Some((name, pos)) => parse_id(&row[pos], row_no, name)?,
            None => UnitId(row_no as u64),
        };
        records.push(Record { unit, values });
    }
    finish(schema, records)
}

/// Parses JSON lines: one object per line keyed by column name; blank lines
/// are skipped.
pub fn parse_jsonl(text: &str, schema: &Schema) -> Result<Dataset> {
    use serde_json::Value as Json;
    schema.validate()?;
    let mut records = Vec::new();
    let mut row_no = 0;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        row_no += 1;
        let parsed: Json = serde_json::from_str(line).map_err(|e| Error::Parse {
            row: row_no,
            column: String::new(),
            message: e.to_string(),
        })?;
        let Json::Object(obj) = parsed else {
            return Err(Error::Parse {
                row: row_no,
                column: String::new(),
                message: "expected a JSON object".into(),
            });
        };
        let header: Vec<String> = obj.keys().cloned().collect();
        check_header(schema, &header)?;
        let mut values = Vec::with_capacity(schema.variables.len());
        for spec in &schema.variables {
            let located = |message: String| Error::Parse {
                row: row_no,
                column: spec.name.clone(),
                message,
            };
            let value = match (&spec.ty, &obj[&spec.name]) {
                (VariableType::Categorical { .. }, Json::String(s)) => Value::Label(s.clone()),
                (VariableType::Categorical { .. }, other) => {
                    return Err(located(format!("expected a string label, got {other}")))
                }
                (_, Json::Number(x)) => Value::Num(
                    x.as_f64()
                        .ok_or_else(|| located(format!("{x} is not representable")))?,
                ),
                (_, Json::Null) => return Err(located("missing value".into())),
                (_, other) => return Err(located(format!("expected a number, got {other}"))),
            };
            spec.check_value(&value).map_err(|e| located(e.to_string()))?;
            values.push(value);
        }
        let unit = match &schema.id_column {
            Some(name) => match &obj[name] {
                Json::Number(x) => x.as_u64().map(UnitId).ok_or_else(|| Error::Parse {
                    row: row_no,
                    column: name.clone(),
                    message: format!("{x} is not a unit id"),
                })?,
                other => parse_id(&other.to_string(), row_no, name)?,
            },
            None => UnitId(row_no as u64),
        };
        records.push(Record { unit, values });
    }
    finish(schema, records)
}

fn finish(schema: &Schema, records: Vec<Record>) -> Result<Dataset> {
    let mut seen = HashSet::with_capacity(records.len());
    for r in &records {
        if !seen.insert(r.unit) {
            return Err(Error::DuplicateUnit(r.unit.0));
        }
    }
    Ok(Dataset {
        schema: schema.clone(),
        records,
    })
}

pub fn load(path: &Path, format: Format, schema: &Schema) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    match format {
        Format::Csv => parse_csv(&text, schema),
        Format::Jsonl => parse_jsonl(&text, schema),
    }
}

fn group_key(v: &Value) -> String {
    match v {
        Value::Num(x) => fmt_real(*x),
        Value::Label(s) => s.clone(),
    }
}

/// Splits a dataset into disjoint partitions covering every record.
pub fn split(ds: &Dataset, strategy: &SplitStrategy) -> Result<Vec<Partition>> {
    let named = |prefix: &str, i: usize| PartitionId(format!("{prefix}-{i}"));
    match strategy {
        SplitStrategy::RoundRobin(0) | SplitStrategy::Contiguous(0) => {
            Err(Error::Split("partition count must be at least 1".into()))
        }
        SplitStrategy::RoundRobin(k) => {
            let mut parts: Vec<Partition> = (0..*k)
                .map(|i| Partition {
                    id: named("rr", i),
                    records: Vec::new(),
                })
                .collect();
            for (i, r) in ds.records.iter().enumerate() {
                parts[i % k].records.push(r.clone());
            }
            Ok(parts)
        }
        SplitStrategy::Contiguous(k) => {
            let n = ds.records.len();
            if *k > n {
                return Err(Error::Split(format!("{k} contiguous partitions of {n} records")));
            }
            let (base, extra) = (n / k, n % k);
            let mut start = 0;
            Ok((0..*k)
                .map(|i| {
                    let len = base + usize::from(i < extra);
                    let records = ds.records[start..start + len].to_vec();
                    start += len;
                    Partition {
                        id: named("chunk", i),
                        records,
                    }
                })
                .collect())
        }
        SplitStrategy::ByColumn(name) => {
            let col = ds
                .schema
                .position(name)
                .ok_or_else(|| Error::Split(format!("no column {name:?}")))?;
            let mut groups: BTreeMap<String, Vec<Record>> = BTreeMap::new();
            for r in &ds.records {
                groups.entry(group_key(&r.values[col])).or_default().push(r.clone());
            }
            Ok(groups
                .into_iter()
                .map(|(key, records)| Partition {
                    id: PartitionId(format!("{name}={key}")),
                    records,
                })
                .collect())
        }
    }
}
