mod common;

use arcnest::bijection::{ptr, ptr_coloured, ColourSemantics};
use arcnest::diagram::{parse, serialize, Arc, ArcDiagram, ClassKind, ObjectClass};
use arcnest::enumerate::series::TruncatedSeries;
use arcnest::structure::{deflate, inflate, is_admissible, BlockType};
use common::{naive_labels, upper_arcs, RoleOracle};
use num_bigint::BigInt;
use proptest::prelude::*;

fn shuffled(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (0..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
}

/// Pairs up the first `2k` entries of a shuffled vertex list.
fn involution() -> impl Strategy<Value = ArcDiagram> {
    shuffled(12)
        .prop_flat_map(|s| {
            let half = s.len() / 2;
            (Just(s), 0..=half)
        })
        .prop_map(|(s, k)| {
            let n = s.len();
            let arcs = (0..k)
                .map(|i| {
                    let (a, b) = (s[2 * i], s[2 * i + 1]);
                    Arc::new(a.min(b), a.max(b))
                })
                .collect();
            ArcDiagram::single_layer(n, arcs).unwrap()
        })
}

fn set_partition() -> impl Strategy<Value = ArcDiagram> {
    (0..=11usize)
        .prop_flat_map(|n| prop::collection::vec(0..n.max(1), n))
        .prop_map(|tags| {
            let n = tags.len();
            let arcs = (0..n)
                .filter_map(|i| {
                    (i + 1..n)
                        .find(|&j| tags[j] == tags[i])
                        .map(|j| Arc::new(i + 1, j + 1))
                })
                .collect();
            ArcDiagram::single_layer(n, arcs).unwrap()
        })
}

fn permutation() -> impl Strategy<Value = ArcDiagram> {
    shuffled(9).prop_map(|s| ArcDiagram::from_permutation(&s, None).unwrap())
}

/// Concatenated blocks of `a` openers followed by `a` closers in arbitrary
/// order, interleaved with fixed points. Every such matching is admissible.
fn block_matching() -> impl Strategy<Value = ArcDiagram> {
    let block = (1..=4usize)
        .prop_flat_map(|a| Just((0..a).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(Some);
    let item = prop_oneof![1 => Just(None), 3 => block];
    prop::collection::vec(item, 0..6).prop_map(|items| {
        let mut arcs = Vec::new();
        let mut next = 1;
        for item in items {
            match item {
                None => next += 1,
                Some(order) => {
                    let a = order.len();
                    for (i, &c) in order.iter().enumerate() {
                        arcs.push(Arc::new(next + i, next + a + c));
                    }
                    next += 2 * a;
                }
            }
        }
        ArcDiagram::single_layer(next - 1, arcs).unwrap()
    })
}

fn class(kind: ClassKind, enhanced: bool) -> ObjectClass {
    ObjectClass::new(kind, enhanced)
}

/// Label exchange is only guaranteed while no OCOC interval carries more than
/// two connecting arcs; see `tests/limits.rs` for a counterexample beyond.
fn narrow(report: &arcnest::AdmissibilityReport) -> bool {
    report.intervals.iter().all(|iv| match iv.block {
        BlockType::OCOC { n, .. } => n <= 2,
        _ => true,
    })
}

fn involution_holds(c: ObjectClass, d: &ArcDiagram) -> Result<(), TestCaseError> {
    let oracle = RoleOracle::new();
    let report = is_admissible(c, d).unwrap();
    prop_assert_eq!(report.admissible, oracle.admissible(c, d));
    match ptr(c, d) {
        Ok(e) => {
            prop_assert!(report.admissible);
            prop_assert_eq!(e.n(), d.n());
            // Loops count as arcs: enhanced maps trade a loop for a transitory.
            let weight = |x: &ArcDiagram| upper_arcs(x).len() + x.lower().len();
            prop_assert_eq!(weight(&e), weight(d));
            prop_assert_eq!(ptr(c, &e).unwrap(), d.clone());
            if narrow(&report) {
                let swapped: Vec<_> = naive_labels(c, d).iter().map(|l| l.swapped()).collect();
                prop_assert_eq!(naive_labels(c, &e), swapped);
            }
        }
        Err(_) => prop_assert!(!report.admissible),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matchings(d in involution(), enhanced in any::<bool>()) {
        involution_holds(class(ClassKind::Matching, enhanced), &d)?;
    }

    #[test]
    fn set_partitions(d in set_partition(), enhanced in any::<bool>()) {
        involution_holds(class(ClassKind::SetPartition, enhanced), &d)?;
    }

    #[test]
    fn permutations(d in permutation()) {
        involution_holds(class(ClassKind::Permutation, true), &d)?;
    }

    #[test]
    fn block_matchings_are_admissible(d in block_matching()) {
        let c = class(ClassKind::Matching, false);
        prop_assert!(is_admissible(c, &d).unwrap().admissible);
        involution_holds(c, &d)?;
    }

    #[test]
    fn colours_ride_along(d in block_matching(), seed in prop::collection::vec(1u32..=3, 12)) {
        let arcs: Vec<Arc> = d
            .upper()
            .iter()
            .enumerate()
            .map(|(i, a)| Arc::coloured(a.open, a.close, seed[i % seed.len()]))
            .collect();
        let d = ArcDiagram::single_layer(d.n(), arcs).unwrap();
        let c = class(ClassKind::Matching, false);
        let e = ptr_coloured(c, &d, ColourSemantics::WholeDiagram).unwrap();
        let palette = |x: &ArcDiagram| {
            let mut v: Vec<u32> = x.upper().iter().map(|a| a.colour).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(palette(&e), palette(&d));
        prop_assert_eq!(ptr_coloured(c, &e, ColourSemantics::WholeDiagram).unwrap(), d);
    }

    #[test]
    fn inflation_round_trips(d in set_partition(), enhanced in any::<bool>()) {
        let (inflated, map) = inflate(&d, enhanced).unwrap();
        prop_assert_eq!(map.original_n(), d.n());
        prop_assert_eq!(inflated.n(), d.n() + map.splits().len());
        prop_assert_eq!(deflate(&inflated, &map).unwrap(), d);
    }

    #[test]
    fn text_round_trips(d in set_partition()) {
        let text = serialize(ClassKind::SetPartition, &d);
        prop_assert_eq!(parse(&text).unwrap().1, d);
    }

    #[test]
    fn geometric_inverts(terms in prop::collection::vec((0u32..3, 1usize..=6, -3i64..=3), 0..8)) {
        let bound = 6;
        let mut f = TruncatedSeries::zero(bound);
        for (m, s, c) in terms {
            f.add_term([m, 0, 0, 0], s, BigInt::from(c));
        }
        let one = TruncatedSeries::one(bound);
        let product = &(&one - &f) * &f.geometric();
        prop_assert!((&product - &one).is_zero());
    }
}
