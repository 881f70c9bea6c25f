use emsum_core::engine::{decode_summary, encode_summary, Encoding};
use emsum_core::ingestion::{split, Dataset, SplitStrategy};
use emsum_core::verification::{oracle_check, Tolerance};
use emsum_core::{
    compose, Mergeable, Observation, Order, Record, Reference, Schema, Summary, SummarySpec,
    Support, UnitId, Value, VariableSpec, VariableType,
};
use proptest::prelude::*;

const CATS: [&str; 3] = ["a", "b", "c"];

fn numeric_spec() -> impl Strategy<Value = SummarySpec> {
    let edges = vec![-100.0, -10.0, 0.0, 10.0, 100.0];
    let leaf = prop_oneof![
        Just(SummarySpec::Count),
        Just(SummarySpec::Min),
        Just(SummarySpec::Max),
        Just(SummarySpec::Sum),
        Just(SummarySpec::Mean),
        (2usize..=6).prop_map(|order| SummarySpec::Moments { order }),
        (1usize..=6, any::<bool>()).prop_map(|(k, small)| SummarySpec::ExtremeK {
            k,
            order: if small { Order::SmallestFirst } else { Order::LargestFirst },
        }),
        Just(SummarySpec::Membership {
            reference: Reference::Range { lo: -5.0, hi: 50.0 }
        }),
        Just(SummarySpec::Histogram { edges: edges.clone() }),
        Just(SummarySpec::Distribution {
            support: Support::Bins(edges)
        }),
    ];
    prop_oneof![
        3 => leaf.clone(),
        1 => prop::collection::vec(leaf, 1..4).prop_map(|p| compose(p).unwrap()),
    ]
}

fn categorical_spec() -> impl Strategy<Value = SummarySpec> {
    let cats: Vec<String> = CATS.iter().map(|s| s.to_string()).collect();
    prop_oneof![
        Just(SummarySpec::BarChart { categories: cats.clone() }),
        Just(SummarySpec::Distribution {
            support: Support::Categories(cats)
        }),
        Just(SummarySpec::Membership {
            reference: Reference::Labels(vec!["b".into()])
        }),
        Just(SummarySpec::Count),
    ]
}

fn nums() -> impl Strategy<Value = Vec<Value>> {
    prop::collection::vec(
        prop_oneof![(-200i32..200).prop_map(f64::from), -1e3f64..1e3],
        0..40,
    )
    .prop_map(|v| v.into_iter().map(Value::Num).collect())
}

fn labels() -> impl Strategy<Value = Vec<Value>> {
    prop::collection::vec(prop::sample::select(CATS.to_vec()), 0..40)
        .prop_map(|v| v.into_iter().map(Value::from).collect())
}

fn case() -> impl Strategy<Value = (SummarySpec, Vec<Value>, Vec<Value>, Vec<Value>)> {
    prop_oneof![
        (numeric_spec(), nums(), nums(), nums()),
        (categorical_spec(), labels(), labels(), labels()),
    ]
}

fn agree(spec: &SummarySpec, x: &Summary, y: &Summary) -> bool {
    if spec.is_exact() {
        x == y
    } else {
        x == y || x.deviation(y).is_some_and(|d| d <= 1e-9)
    }
}

fn tagged(offset: u64, values: &[Value]) -> Vec<Observation> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| Observation::new(UnitId(offset + i as u64), v.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn merge_law_holds((spec, a, b, _) in case()) {
        let report = oracle_check(&spec, &tagged(0, &a), &tagged(1000, &b), Tolerance::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.outcome);
    }

    #[test]
    fn merge_is_commutative((spec, a, b, _) in case()) {
        let sa = spec.summarize(&a).unwrap();
        let sb = spec.summarize(&b).unwrap();
        let ab = sa.merge(&sb).unwrap();
        let ba = sb.merge(&sa).unwrap();
        prop_assert!(agree(&spec, &ab, &ba), "{} vs {}", ab, ba);
    }

    #[test]
    fn merge_is_associative((spec, a, b, c) in case()) {
        let [sa, sb, sc] = [&a, &b, &c].map(|v| spec.summarize(v).unwrap());
        let left = sa.merge(&sb).unwrap().merge(&sc).unwrap();
        let right = sa.merge(&sb.merge(&sc).unwrap()).unwrap();
        prop_assert!(agree(&spec, &left, &right), "{} vs {}", left, right);
    }

    #[test]
    fn empty_is_identity((spec, a, _, _) in case()) {
        let sa = spec.summarize(&a).unwrap();
        let e = spec.empty();
        prop_assert_eq!(&sa.merge(&e).unwrap(), &sa);
        prop_assert_eq!(&e.merge(&sa).unwrap(), &sa);
    }

    #[test]
    fn extreme_k_is_the_k_extreme_multiset(xs in prop::collection::vec(-50i32..50, 0..30),
                                          ys in prop::collection::vec(-50i32..50, 0..30),
                                          k in 1usize..8, small in any::<bool>()) {
        let order = if small { Order::SmallestFirst } else { Order::LargestFirst };
        let spec = SummarySpec::ExtremeK { k, order };
        let vals = |v: &[i32]| v.iter().map(|&x| Value::Num(f64::from(x))).collect::<Vec<_>>();
        let merged = spec.summarize(&vals(&xs)).unwrap().merge(&spec.summarize(&vals(&ys)).unwrap()).unwrap();
        let mut all: Vec<i32> = xs.iter().chain(&ys).copied().collect();
        all.sort_unstable();
        if !small {
            all.reverse();
        }
        all.truncate(k);
        let Summary::ExtremeK(e) = merged else { panic!("kind") };
        let expected: Vec<f64> = all.into_iter().map(f64::from).collect();
        prop_assert_eq!(e.values, expected);
    }

    #[test]
    fn codec_round_trips((spec, a, _, _) in case(), hex in any::<bool>()) {
        let s = spec.summarize(&a).unwrap();
        let enc = if hex { Encoding::FixedHex } else { Encoding::Decimal };
        let bytes = encode_summary(&s, enc).unwrap();
        let back = decode_summary(&bytes).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(encode_summary(&back, enc).unwrap(), bytes);
    }

    #[test]
    fn splits_partition_the_records(n in 0usize..60, k in 1usize..6, rr in any::<bool>()) {
        let schema = Schema::new(vec![VariableSpec::new("x", VariableType::Numeric, SummarySpec::Count)]);
        let records = (0..n)
            .map(|i| Record { unit: UnitId(i as u64), values: vec![Value::Num(i as f64)] })
            .collect();
        let ds = Dataset::new(schema, records).unwrap();
        let strategy = if rr { SplitStrategy::RoundRobin(k) } else { SplitStrategy::Contiguous(k) };
        match split(&ds, &strategy) {
            Ok(parts) => {
                let mut ids: Vec<u64> = parts.iter().flat_map(|p| p.unit_ids()).map(|u| u.0).collect();
                ids.sort_unstable();
                prop_assert_eq!(ids, (0..n as u64).collect::<Vec<_>>());
            }
            Err(_) => prop_assert!(!rr && k > n),
        }
    }
}
