//! Canonical JSON encoding of summaries and summary files.
//!
//! Output is compact JSON with object keys sorted, so equal summaries encode
//! to equal bytes. Reals use the shortest decimal that round-trips. The
//! fixed-width encoding instead writes every number as a tagged 16-digit hex
//! bit pattern (`"f64:3ff0000000000000"`, `"u64:000000000000000a"`), which
//! makes the encoded length depend only on the summary's parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value as Json};

use crate::combinators::SchemaSummary;
use crate::error::{Error, Result};
use crate::summary::{Mergeable, Summary, SummarySpec};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    #[default]
    Decimal,
    FixedHex,
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decimal" => Ok(Encoding::Decimal),
            "hex" | "fixed_hex" => Ok(Encoding::FixedHex),
            _ => Err(Error::InvalidSpec(format!("unknown encoding {s:?}"))),
        }
    }
}

/// Rebuilds every object with its keys in sorted order.
fn canonicalize(v: Json) -> Json {
    match v {
        Json::Object(map) => {
            let sorted: BTreeMap<String, Json> =
                map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect();
            Json::Object(sorted.into_iter().collect::<Map<String, Json>>())
        }
        Json::Array(xs) => Json::Array(xs.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

const ESCAPE: &str = "str:";

fn looks_tagged(s: &str) -> bool {
    let Some((tag, digits)) = s.split_once(':') else {
        return false;
    };
    matches!(tag, "f64" | "u64" | "i64")
        && digits.len() == 16
        && digits.bytes().all(|b| b.is_ascii_hexdigit())
}

fn to_fixed_hex(v: Json) -> Json {
    match v {
        Json::Number(n) => Json::String(if let Some(u) = n.as_u64() {
            format!("u64:{u:016x}")
        } else if let Some(i) = n.as_i64() {
            format!("i64:{:016x}", i as u64)
        } else {
            let f = n.as_f64().expect("JSON number is u64, i64 or f64");
            format!("f64:{:016x}", f.to_bits())
        }),
        Json::String(s) if looks_tagged(&s) || s.starts_with(ESCAPE) => {
            Json::String(format!("{ESCAPE}{s}"))
        }
        Json::Array(xs) => Json::Array(xs.into_iter().map(to_fixed_hex).collect()),
        Json::Object(map) => Json::Object(map.into_iter().map(|(k, v)| (k, to_fixed_hex(v))).collect()),
        other => other,
    }
}

fn from_fixed_hex(v: Json) -> Result<Json> {
    Ok(match v {
        Json::String(s) => {
            if let Some(rest) = s.strip_prefix(ESCAPE) {
                Json::String(rest.to_string())
            } else if looks_tagged(&s) {
                let (tag, digits) = s.split_once(':').expect("tagged");
                let bits = u64::from_str_radix(digits, 16)
                    .map_err(|e| Error::Malformed(format!("{s:?}: {e}")))?;
                match tag {
                    "u64" => Json::Number(bits.into()),
                    "i64" => Json::Number((bits as i64).into()),
                    _ => Json::Number(
                        Number::from_f64(f64::from_bits(bits))
                            .ok_or_else(|| Error::Malformed(format!("{s:?} is not finite")))?,
                    ),
                }
            } else {
                Json::String(s)
            }
        }
        Json::Number(n) => {
            return Err(Error::Malformed(format!(
                "bare number {n} in a fixed-width document"
            )))
        }
        Json::Array(xs) => Json::Array(xs.into_iter().map(from_fixed_hex).collect::<Result<_>>()?),
        Json::Object(map) => Json::Object(
            map.into_iter()
                .map(|(k, v)| Ok((k, from_fixed_hex(v)?)))
                .collect::<Result<_>>()?,
        ),
        other => other,
    })
}

fn encode_payload<T: Serialize>(value: &T, encoding: Encoding) -> Result<Json> {
    let v = serde_json::to_value(value)?;
    Ok(match encoding {
        Encoding::Decimal => v,
        Encoding::FixedHex => to_fixed_hex(v),
    })
}

fn decode_payload(v: Json, encoding: Encoding) -> Result<Json> {
    match encoding {
        Encoding::Decimal => Ok(v),
        Encoding::FixedHex => from_fixed_hex(v),
    }
}

fn to_bytes(doc: Json) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(&canonicalize(doc))?)
}

fn envelope(bytes: &[u8]) -> Result<(Map<String, Json>, Encoding)> {
    let doc: Json = serde_json::from_slice(bytes)?;
    let Json::Object(mut map) = doc else {
        return Err(Error::Malformed("top level is not an object".into()));
    };
    let version = map
        .remove("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Malformed("missing format_version".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Version(version));
    }
    let encoding = match map.remove("encoding") {
        Some(e) => serde_json::from_value(e)?,
        None => return Err(Error::Malformed("missing encoding".into())),
    };
    Ok((map, encoding))
}

fn take(map: &mut Map<String, Json>, key: &str) -> Result<Json> {
    map.remove(key)
        .ok_or_else(|| Error::Malformed(format!("missing {key}")))
}

/// Canonical bytes of a standalone summary.
pub fn encode_summary(s: &Summary, encoding: Encoding) -> Result<Vec<u8>> {
    let mut doc = Map::new();
    doc.insert("encoding".into(), serde_json::to_value(encoding)?);
    doc.insert("format_version".into(), FORMAT_VERSION.into());
    doc.insert("summary".into(), encode_payload(s, encoding)?);
    to_bytes(Json::Object(doc))
}

/// Parses and validates a standalone summary.
pub fn decode_summary(bytes: &[u8]) -> Result<Summary> {
    let (mut map, encoding) = envelope(bytes)?;
    let payload = decode_payload(take(&mut map, "summary")?, encoding)?;
    let s: Summary = serde_json::from_value(payload)?;
    s.spec().validate().map_err(|e| Error::Invariant(e.to_string()))?;
    s.validate()?;
    Ok(s)
}

/// A persisted schema summary: spec echo, payload and the partitions it
/// covers.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryFile {
    pub encoding: Encoding,
    pub schema: BTreeMap<String, SummarySpec>,
    pub summaries: SchemaSummary,
    pub provenance: BTreeSet<String>,
}

impl SummaryFile {
    pub fn new(summaries: SchemaSummary, provenance: BTreeSet<String>, encoding: Encoding) -> Self {
        SummaryFile {
            encoding,
            schema: summaries.specs(),
            summaries,
            provenance,
        }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut doc = Map::new();
        doc.insert("encoding".into(), serde_json::to_value(self.encoding)?);
        doc.insert("format_version".into(), FORMAT_VERSION.into());
        doc.insert("provenance".into(), serde_json::to_value(&self.provenance)?);
        doc.insert("schema".into(), encode_payload(&self.schema, self.encoding)?);
        doc.insert("summaries".into(), encode_payload(&self.summaries, self.encoding)?);
        to_bytes(Json::Object(doc))
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (mut map, encoding) = envelope(bytes)?;
        let provenance: BTreeSet<String> = serde_json::from_value(take(&mut map, "provenance")?)?;
        let schema: BTreeMap<String, SummarySpec> =
            serde_json::from_value(decode_payload(take(&mut map, "schema")?, encoding)?)?;
        let summaries: SchemaSummary =
            serde_json::from_value(decode_payload(take(&mut map, "summaries")?, encoding)?)?;
        if let Some(extra) = map.keys().next() {
            return Err(Error::Malformed(format!("unexpected field {extra:?}")));
        }
        let file = SummaryFile {
            encoding,
            schema,
            summaries,
            provenance,
        };
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<()> {
        for spec in self.schema.values() {
            spec.validate().map_err(|e| Error::Invariant(e.to_string()))?;
        }
        if self.schema != self.summaries.specs() {
            return Err(Error::Invariant("summaries do not match the spec echo".into()));
        }
        self.summaries.validate()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes =
            std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        SummaryFile::from_bytes(bytes.trim_ascii_end())
    }

    /// Writes the canonical bytes followed by a newline.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = self.to_bytes()?;
        bytes.push(b'\n');
        std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Merges two files covering disjoint partition sets.
    pub fn merge(&self, other: &SummaryFile) -> Result<SummaryFile> {
        if self.schema != other.schema {
            return Err(Error::Incompatible {
                left: format!("{:?}", self.schema.keys().collect::<Vec<_>>()),
                right: format!("{:?}", other.schema.keys().collect::<Vec<_>>()),
                reason: "summary files have different specs".into(),
            });
        }
        if let Some(p) = self.provenance.intersection(&other.provenance).next() {
            return Err(Error::Overlap(format!("partition {p:?} is covered by both files")));
        }
        Ok(SummaryFile {
            encoding: self.encoding,
            schema: self.schema.clone(),
            summaries: self.summaries.merge(&other.summaries)?,
            provenance: self.provenance.union(&other.provenance).cloned().collect(),
        })
    }
}

/// Reads and merges summary files in the given order.
pub fn merge_files<P: AsRef<Path>>(paths: &[P]) -> Result<SummaryFile> {
    let mut iter = paths.iter();
    let first = iter.next().ok_or(Error::EmptyMerge)?;
    let mut acc = SummaryFile::read(first.as_ref())?;
    for p in iter {
        acc = acc.merge(&SummaryFile::read(p.as_ref())?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summary::{Order, Reference, Support};
    use crate::value::Value;

    fn sample_summaries() -> Vec<Summary> {
        let nums: Vec<Value> = [1.5, -2.0, 0.1, 7.0, 3.25].iter().map(|&x| Value::Num(x)).collect();
        let specs = [
            SummarySpec::Count,
            SummarySpec::Min,
            SummarySpec::Sum,
            SummarySpec::Mean,
            SummarySpec::ExtremeK {
                k: 2,
                order: Order::LargestFirst,
            },
            SummarySpec::Moments { order: 4 },
            SummarySpec::Membership {
                reference: Reference::Range { lo: 0.0, hi: 2.0 },
            },
            SummarySpec::Histogram {
                edges: vec![-1.0, 0.0, 1.0, 5.0],
            },
            SummarySpec::Distribution {
                support: Support::Bins(vec![-1.0, 0.0, 1.0, 5.0]),
            },
            SummarySpec::interval(),
        ];
        let mut out: Vec<Summary> = specs.iter().map(|s| s.summarize(&nums).unwrap()).collect();
        out.push(SummarySpec::Max.empty());
        out
    }

    #[test]
    fn round_trip_both_encodings() {
        for s in sample_summaries() {
            for enc in [Encoding::Decimal, Encoding::FixedHex] {
                let bytes = encode_summary(&s, enc).unwrap();
                let back = decode_summary(&bytes).unwrap();
                assert_eq!(back, s);
                assert_eq!(encode_summary(&back, enc).unwrap(), bytes);
            }
        }
    }

    #[test]
    fn keys_are_sorted() {
        let s = SummarySpec::Mean.summarize(&[Value::Num(2.0)]).unwrap();
        let text = String::from_utf8(encode_summary(&s, Encoding::Decimal).unwrap()).unwrap();
        assert_eq!(
            text,
            r#"{"encoding":"decimal","format_version":1,"summary":{"kind":"mean","mean":2.0,"n":1}}"#
        );
    }

    #[test]
    fn version_mismatch() {
        let text = r#"{"encoding":"decimal","format_version":2,"summary":{"kind":"count","n":1}}"#;
        assert_eq!(decode_summary(text.as_bytes()), Err(Error::Version(2)));
    }

    #[test]
    fn tampered_payload_rejected() {
        let text = r#"{"encoding":"decimal","format_version":1,"summary":{"kind":"histogram","edges":[0.0,1.0],"counts":[2],"underflow":0,"overflow":0,"n":3}}"#;
        assert!(matches!(decode_summary(text.as_bytes()), Err(Error::Invariant(_))));
        let text = r#"{"encoding":"decimal","format_version":1,"summary":{"kind":"distribution","support":{"categories":["a","b"]},"n":2,"p":[0.5,0.6]}}"#;
        assert!(matches!(decode_summary(text.as_bytes()), Err(Error::Invariant(_))));
        let text = r#"{"encoding":"decimal","format_version":1,"summary":{"kind":"nope"}}"#;
        assert!(matches!(decode_summary(text.as_bytes()), Err(Error::Malformed(_))));
    }

    #[test]
    fn tagged_looking_labels_survive_fixed_hex() {
        let cats = vec!["u64:0000000000000001".to_string(), "str:x".to_string(), "plain".to_string()];
        let s = SummarySpec::BarChart { categories: cats.clone() }
            .summarize(&[Value::Label(cats[0].clone())])
            .unwrap();
        let bytes = encode_summary(&s, Encoding::FixedHex).unwrap();
        assert_eq!(decode_summary(&bytes).unwrap(), s);
    }

    #[test]
    fn file_merge_checks_provenance() {
        let s = SchemaSummary {
            variables: [("x".to_string(), SummarySpec::Count.summarize(&[Value::Num(1.0)]).unwrap())]
                .into_iter()
                .collect(),
        };
        let a = SummaryFile::new(s.clone(), ["a#0".to_string()].into(), Encoding::Decimal);
        let b = SummaryFile::new(s.clone(), ["b#0".to_string()].into(), Encoding::Decimal);
        let m = a.merge(&b).unwrap();
        assert_eq!(m.provenance.len(), 2);
        assert_eq!(m.summaries.get("x").unwrap().units(), Some(2));
        assert!(matches!(a.merge(&a), Err(Error::Overlap(_))));
        let back = SummaryFile::from_bytes(&m.to_bytes().unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
