//! Counterexamples to exact mergeability.
//!
//! If `stat(A₁) = stat(A₂)` and `stat(B₁) = stat(B₂)` for disjoint pairs
//! `(A₁, B₁)` and `(A₂, B₂)` while `stat(A₁ ∪ B₁) ≠ stat(A₂ ∪ B₂)`, no merge
//! function `F` can exist, since it would have to map the same arguments to
//! two different results.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::fmt_real;

/// A deterministic function of a value list, compared by exact equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `sort(v)[⌈n/2⌉]`, ascending, 1-based.
    Median,
    /// `sort(v)[k]`, ascending, 1-based; undefined when `n < k`.
    KthSmallest(usize),
    Count,
    Sum,
    Min,
    Max,
    /// The `(n, μ)` pair.
    Mean,
}

/// Value of a statistic: a short tuple of reals compared bit for bit (with
/// `-0.0` identified with `0.0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StatValue(pub Vec<f64>);

impl StatValue {
    fn key(&self) -> Vec<u64> {
        self.0.iter().map(|x| (x + 0.0).to_bits()).collect()
    }

    fn same(&self, other: &StatValue) -> bool {
        self.key() == other.key()
    }
}

impl fmt::Display for StatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => write!(f, "{}", fmt_real(*x)),
            xs => write!(
                f,
                "({})",
                xs.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

impl Statistic {
    pub fn eval(&self, values: &[f64]) -> Option<StatValue> {
        let n = values.len();
        let one = |x: f64| Some(StatValue(vec![x]));
        match self {
            Statistic::Count => one(n as f64),
            Statistic::Sum => one(values.iter().sum()),
            _ if n == 0 => None,
            Statistic::Median => one(sorted(values)[n.div_ceil(2) - 1]),
            Statistic::KthSmallest(k) => {
                if *k == 0 || *k > n {
                    None
                } else {
                    one(sorted(values)[k - 1])
                }
            }
            Statistic::Min => one(values.iter().copied().fold(f64::INFINITY, f64::min)),
            Statistic::Max => one(values.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            Statistic::Mean => Some(StatValue(vec![
                n as f64,
                values.iter().sum::<f64>() / n as f64,
            ])),
        }
    }

    /// `true` for statistics that are views of an exactly mergeable summary,
    /// for which no witness can exist.
    pub fn is_mergeable(&self) -> bool {
        !matches!(self, Statistic::Median | Statistic::KthSmallest(_))
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Median => write!(f, "median"),
            Statistic::KthSmallest(k) => write!(f, "kth:{k}"),
            Statistic::Count => write!(f, "count"),
            Statistic::Sum => write!(f, "sum"),
            Statistic::Min => write!(f, "min"),
            Statistic::Max => write!(f, "max"),
            Statistic::Mean => write!(f, "mean"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "median" => Statistic::Median,
            "count" => Statistic::Count,
            "sum" => Statistic::Sum,
            "min" => Statistic::Min,
            "max" => Statistic::Max,
            "mean" => Statistic::Mean,
            _ => {
                let k = s
                    .strip_prefix("kth:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::InvalidSpec(format!("unknown statistic {s:?}")))?;
                Statistic::KthSmallest(k)
            }
        })
    }
}

/// Four value lists; each list element is a distinct unit, so `A₁ ∩ B₁ = ∅`
/// and `A₂ ∩ B₂ = ∅` hold as unit sets even when values repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessQuadruple {
    pub statistic: Statistic,
    pub a1: Vec<f64>,
    pub b1: Vec<f64>,
    pub a2: Vec<f64>,
    pub b2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub valid: bool,
    pub a1: StatValue,
    pub b1: StatValue,
    pub a2: StatValue,
    pub b2: StatValue,
    pub union1: StatValue,
    pub union2: StatValue,
}

impl WitnessQuadruple {
    pub fn sets(&self) -> [(&'static str, &[f64]); 4] {
        [
            ("A1", &self.a1),
            ("B1", &self.b1),
            ("A2", &self.a2),
            ("B2", &self.b2),
        ]
    }

    pub fn union1(&self) -> Vec<f64> {
        self.a1.iter().chain(&self.b1).copied().collect()
    }

    pub fn union2(&self) -> Vec<f64> {
        self.a2.iter().chain(&self.b2).copied().collect()
    }
}

/// `true` iff the quadruple shows the statistic is not exactly mergeable.
pub fn check_witness(w: &WitnessQuadruple) -> Result<WitnessReport> {
    let eval = |name: &str, vs: &[f64]| -> Result<StatValue> {
        if vs.is_empty() {
            return Err(Error::MalformedWitness(format!("{name} is empty")));
        }
        if vs.iter().any(|x| !x.is_finite()) {
            return Err(Error::MalformedWitness(format!("{name} has a non-finite value")));
        }
        w.statistic
            .eval(vs)
            .ok_or_else(|| Error::MalformedWitness(format!("{} is undefined on {name}", w.statistic)))
    };
    let [a1, b1, a2, b2] = w.sets().map(|(name, vs)| eval(name, vs));
    let (a1, b1, a2, b2) = (a1?, b1?, a2?, b2?);
    let union1 = eval("A1+B1", &w.union1())?;
    let union2 = eval("A2+B2", &w.union2())?;
    let valid = a1.same(&a2) && b1.same(&b2) && !union1.same(&union2);
    Ok(WitnessReport {
        valid,
        a1,
        b1,
        a2,
        b2,
        union1,
        union2,
    })
}

pub const MAX_UNIVERSE: usize = 12;
pub const MAX_SET_SIZE: usize = 4;

/// Sub-multisets of `universe` with 1..=max_size elements, shortest first and
/// lexicographic within a size.
fn multisets(universe: &[f64], max_size: usize) -> Vec<Vec<f64>> {
    fn extend(universe: &[f64], start: usize, left: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..universe.len() {
            cur.push(universe[i]);
            extend(universe, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 1..=max_size {
        extend(universe, 0, size, &mut Vec::with_capacity(size), &mut out);
    }
    out
}

/// Exhaustive search for a witness quadruple over sub-multisets of a small
/// universe. Deterministic: the first conflicting pair of splits in
/// enumeration order is returned.
pub fn search_witness(
    statistic: Statistic,
    universe: &[f64],
    max_size: usize,
) -> Result<Option<WitnessQuadruple>> {
    let mut universe = universe.to_vec();
    if universe.iter().any(|x| !x.is_finite()) {
        return Err(Error::BoundsExceeded("universe values must be finite".into()));
    }
    universe.sort_by(f64::total_cmp);
    universe.dedup();
    if universe.is_empty() || universe.len() > MAX_UNIVERSE {
        return Err(Error::BoundsExceeded(format!(
            "universe size {} outside 1..={MAX_UNIVERSE}",
            universe.len()
        )));
    }
    if max_size == 0 || max_size > MAX_SET_SIZE {
        return Err(Error::BoundsExceeded(format!(
            "max set size {max_size} outside 1..={MAX_SET_SIZE}"
        )));
    }

    // intern statistic values so pair keys are small
    let mut ids: HashMap<Vec<u64>, u32> = HashMap::new();
    let mut sets = Vec::new();
    for set in multisets(&universe, max_size) {
        if let Some(v) = statistic.eval(&set) {
            let next = ids.len() as u32;
            let id = *ids.entry(v.key()).or_insert(next);
            sets.push((set, id));
        }
    }

    let mut seen: HashMap<(u32, u32), (usize, usize, StatValue)> = HashMap::new();
    let mut union = Vec::with_capacity(2 * max_size);
    for (i, (a, a_id)) in sets.iter().enumerate() {
        for (j, (b, b_id)) in sets.iter().enumerate() {
            union.clear();
            union.extend_from_slice(a);
            union.extend_from_slice(b);
            let Some(u) = statistic.eval(&union) else {
                continue;
            };
            match seen.get(&(*a_id, *b_id)) {
                None => {
                    seen.insert((*a_id, *b_id), (i, j, u));
                }
                Some((i0, j0, u0)) if !u0.same(&u) => {
                    return Ok(Some(WitnessQuadruple {
                        statistic,
                        a1: sets[*i0].0.clone(),
                        b1: sets[*j0].0.clone(),
                        a2: a.clone(),
                        b2: b.clone(),
                    }));
                }
                Some(_) => {}
            }
        }
    }
    Ok(None)
}

/// The two published counterexamples: median and the 2nd smallest value.
pub fn published_example(n: u8) -> Option<WitnessQuadruple> {
    match n {
        1 => Some(WitnessQuadruple {
            statistic: Statistic::Median,
            a1: vec![3.0, 4.0, 1.0],
            b1: vec![9.0, 6.0],
            a2: vec![3.0, 8.0],
            b2: vec![6.0, 2.0, 7.0],
        }),
        2 => Some(WitnessQuadruple {
            statistic: Statistic::KthSmallest(2),
            a1: vec![1.0, 3.0, 5.0],
            b1: vec![2.0, 5.0, 6.0],
            a2: vec![3.0, 3.0, 6.0],
            b2: vec![4.0, 5.0, 7.0],
        }),
        _ => None,
    }
}
