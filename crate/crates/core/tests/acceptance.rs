//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line (visible with `--nocapture`) before asserting.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use arcnest::bijection::{plan_interval, ptr, Step4};
use arcnest::diagram::{parse, serialize, Arc, ArcDiagram, ClassKind, ObjectClass};
use arcnest::enumerate::{
    brute_force_count, joint_table, seq_enhanced_matchings, seq_enhanced_set_partitions,
    seq_matchings, seq_set_partitions, Population,
};
use arcnest::stats::{label_of, layer_label, pair_counts, DiagramLabel, Label};
use arcnest::structure::{analyze_layer, is_admissible, BlockType};
use common::{all_objects, arc_pairs, naive_label, naive_labels, upper_arcs, RoleOracle};
use num_bigint::BigInt;

const MATCHING_TERMS: [u64; 15] = [
    1, 1, 2, 4, 10, 26, 76, 232, 756, 2548, 8906, 31846, 116422, 432758, 1634944,
];
const ENHANCED_MATCHING_TERMS: [u64; 14] = [
    1, 1, 2, 4, 10, 25, 67, 180, 496, 1370, 3863, 10881, 31448, 90280,
];
const ENHANCED_PARTITION_TERMS: [u64; 11] = [1, 1, 2, 5, 15, 44, 147, 439, 1484, 4469, 15217];
const CATALAN: [u64; 7] = [1, 1, 2, 5, 14, 42, 132];

// Wall-clock budgets; sequences must match exactly (zero tolerance).
const SEQ_BUDGET_FAST: Duration = Duration::from_secs(10);
const SEQ_BUDGET_PARTITIONS: Duration = Duration::from_secs(30);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
const SWEEP_BUDGET: Duration = Duration::from_secs(600);

fn verdict(id: u32, what: &str, failures: &[String], elapsed: Duration, budget: Duration) {
    let ok = failures.is_empty() && elapsed <= budget;
    println!(
        "criterion {id} {}: {what} [{:.2?} of {:?}]{}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        budget,
        if failures.is_empty() {
            String::new()
        } else {
            format!(" -- {} failure(s), first: {}", failures.len(), failures[0])
        }
    );
    assert!(failures.is_empty(), "criterion {id}: {failures:?}");
    assert!(elapsed <= budget, "criterion {id}: took {elapsed:?}");
}

fn class(kind: ClassKind, enhanced: bool) -> ObjectClass {
    ObjectClass::new(kind, enhanced)
}

fn cli_sequence(args: &[&str]) -> Vec<u64> {
    let out = Command::new(env!("CARGO_BIN_EXE_arcnest"))
        .args(args)
        .output()
        .expect("run arcnest");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

fn compare_sequence(got: &[u64], want: &[u64]) -> Vec<String> {
    if got == want {
        Vec::new()
    } else {
        vec![format!("got {got:?}, want {want:?}")]
    }
}

#[test]
fn criterion_1_matching_sequence() {
    let start = Instant::now();
    let got = cli_sequence(&["enum", "--class", "matching", "--terms", "15"]);
    verdict(
        1,
        "partial matching sequence, 15 terms",
        &compare_sequence(&got, &MATCHING_TERMS),
        start.elapsed(),
        SEQ_BUDGET_FAST,
    );
}

#[test]
fn criterion_2_enhanced_matching_sequence() {
    let start = Instant::now();
    let got = cli_sequence(&["enum", "--class", "matching", "--enhanced", "--terms", "14"]);
    verdict(
        2,
        "enhanced partial matching sequence, 14 terms",
        &compare_sequence(&got, &ENHANCED_MATCHING_TERMS),
        start.elapsed(),
        SEQ_BUDGET_FAST,
    );
}

#[test]
fn criterion_3_enhanced_partition_sequence() {
    let start = Instant::now();
    let got = cli_sequence(&[
        "enum",
        "--class",
        "set-partition",
        "--enhanced",
        "--terms",
        "11",
    ]);
    verdict(
        3,
        "enhanced set partition sequence, 11 terms",
        &compare_sequence(&got, &ENHANCED_PARTITION_TERMS),
        start.elapsed(),
        SEQ_BUDGET_PARTITIONS,
    );
}

#[test]
fn criterion_4_series_equal_exhaustive_counts() {
    let start = Instant::now();
    let oracle = RoleOracle::new();
    let cases: [(ObjectClass, usize, Vec<BigInt>); 4] = [
        (
            class(ClassKind::Matching, false),
            10,
            seq_matchings(11).terms,
        ),
        (
            class(ClassKind::Matching, true),
            10,
            seq_enhanced_matchings(11).terms,
        ),
        (
            class(ClassKind::SetPartition, false),
            9,
            seq_set_partitions(10).terms,
        ),
        (
            class(ClassKind::SetPartition, true),
            9,
            seq_enhanced_set_partitions(10).terms,
        ),
    ];
    let mut failures = Vec::new();
    for (c, max_n, series) in &cases {
        for n in 0..=*max_n {
            let library = brute_force_count(*c, n).unwrap();
            let independent = all_objects(c.kind, n)
                .iter()
                .filter(|d| oracle.admissible(*c, d))
                .count() as u64;
            if series[n] != BigInt::from(library) || library != independent {
                failures.push(format!(
                    "{:?} enhanced={} n={n}: series {} library {library} oracle {independent}",
                    c.kind, c.enhanced, series[n]
                ));
            }
        }
    }
    verdict(
        4,
        "series coefficients equal exhaustive admissible counts",
        &failures,
        start.elapsed(),
        ORACLE_BUDGET,
    );
}

fn swapped_all(labels: &[Label]) -> Vec<Label> {
    labels.iter().map(Label::swapped).collect()
}

#[test]
fn criterion_5_involution_and_label_swap() {
    let start = Instant::now();
    let oracle = RoleOracle::new();
    let sweeps = [
        (class(ClassKind::Matching, false), 8),
        (class(ClassKind::Matching, true), 8),
        (class(ClassKind::SetPartition, false), 7),
        (class(ClassKind::SetPartition, true), 7),
        (class(ClassKind::Permutation, true), 6),
    ];
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (c, max_n) in sweeps {
        for n in 0..=max_n {
            for d in all_objects(c.kind, n) {
                let admissible = oracle.admissible(c, &d);
                let library = is_admissible(c, &d).unwrap().admissible;
                let text = serialize(c.kind, &d);
                if admissible != library {
                    failures.push(format!("admissibility disagrees on {text}"));
                }
                if !admissible {
                    continue;
                }
                checked += 1;
                let image = match ptr(c, &d) {
                    Ok(e) => e,
                    Err(e) => {
                        failures.push(format!("{text}: {e}"));
                        continue;
                    }
                };
                if ptr(c, &image).as_ref() != Ok(&d) {
                    failures.push(format!("not an involution on {text}"));
                }
                if naive_labels(c, &image) != swapped_all(&naive_labels(c, &d)) {
                    failures.push(format!("labels not swapped on {text}"));
                }
            }
        }
    }
    assert!(checked > 0);
    verdict(
        5,
        &format!("involution and label swap over {checked} admissible objects"),
        &failures,
        start.elapsed(),
        SWEEP_BUDGET,
    );
}

fn pairs_of(text: &str) -> Vec<(usize, usize)> {
    arc_pairs(parse(text).unwrap().1.upper())
}

#[test]
fn criterion_6_golden_examples() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };

    // OC matching and its image with the full labels.
    let (m, mu) = parse("M n=10; 1-10,2-6,3-7,4-8,5-9").unwrap();
    let nu = ptr(m, &mu).unwrap();
    let nu_text = serialize(m.kind, &nu);
    expect(
        nu_text == "M n=10; 1-6,2-10,3-9,4-8,5-7",
        format!("OC image {nu_text}"),
    );
    let l_mu = Label::new(vec![4], vec![6, 4, 1]);
    let l_nu = Label::new(vec![6, 4, 1], vec![4]);
    expect(
        label_of(m, &mu) == DiagramLabel::Single(l_mu.clone())
            && naive_label(mu.upper(), false) == l_mu,
        "label of the OC matching".into(),
    );
    expect(
        label_of(m, &nu) == DiagramLabel::Single(l_nu.clone())
            && naive_label(nu.upper(), false) == l_nu,
        "label of its image".into(),
    );

    // OCOC matching: two reversals, then the connecting closers.
    let (m, before) = parse("M n=18; 1-10,2-8,3-16,4-9,5-18,6-7,11-15,12-14,13-17").unwrap();
    let analysis = analyze_layer(&before, false).unwrap();
    let block = analysis.blocks[0].1;
    expect(
        analysis.blocks.len() == 1 && block == BlockType::OCOC { n: 2, k: 4, j: 3 },
        format!("OCOC classification {:?}", analysis.blocks),
    );
    let plan = plan_interval(before.upper(), block, Step4::Closers).unwrap();
    let mut mid = arc_pairs(&plan.apply_first(before.upper(), 2));
    mid.sort();
    let mut want_mid = vec![
        (1, 7),
        (5, 8),
        (6, 10),
        (3, 9),
        (12, 18),
        (11, 17),
        (13, 15),
        (4, 16),
        (2, 14),
    ];
    want_mid.sort();
    expect(mid == want_mid, format!("after two reversals {mid:?}"));
    let after = ptr(m, &before).unwrap();
    let after_text = serialize(m.kind, &after);
    expect(
        after_text == "M n=18; 1-7,2-16,3-9,4-14,5-8,6-10,11-17,12-18,13-15",
        format!("OCOC image {after_text}"),
    );
    expect(
        pairs_of(&after_text).contains(&(4, 14)) && pairs_of(&after_text).contains(&(2, 16)),
        "connecting arcs after the third reversal".into(),
    );

    // Permutation: both halves transformed, upper interval labels swapped.
    let (s, sigma) = parse("S n=12; 9 5 6 7 8 3 2 1 4 12 11 10").unwrap();
    let rho = ptr(s, &sigma).unwrap();
    let rho_text = serialize(s.kind, &rho);
    expect(
        rho_text == "S n=12; 5 9 8 7 6 4 1 2 3 11 12 10",
        format!("permutation image {rho_text}"),
    );
    let first_interval = |d: &ArcDiagram| -> Vec<Arc> {
        d.upper().iter().copied().filter(|a| a.close <= 9).collect()
    };
    let up_sigma = first_interval(&sigma);
    let up_rho = first_interval(&rho);
    expect(
        arc_pairs(&up_sigma) == vec![(1, 9), (2, 5), (3, 6), (4, 7), (5, 8)],
        "upper interval of the permutation".into(),
    );
    expect(
        arc_pairs(&up_rho) == vec![(1, 5), (2, 9), (3, 8), (4, 7), (5, 6)],
        "upper interval of the image".into(),
    );
    let before_label = layer_label(&up_sigma, true);
    let after_label = layer_label(&up_rho, true);
    expect(
        before_label.nestings(2) == 4 && before_label.crossings(4) == 1,
        format!("4 2-nestings and 1 4-crossing: {before_label:?}"),
    );
    expect(
        after_label.crossings(2) == 4 && after_label.nestings(4) == 1,
        format!("4 2-crossings and 1 4-nesting: {after_label:?}"),
    );
    expect(
        before_label == Label::new(vec![4], vec![6, 4, 1]) && after_label == before_label.swapped(),
        "full upper interval labels".into(),
    );
    expect(
        naive_label(&up_sigma, true) == before_label && naive_label(&up_rho, true) == after_label,
        "upper interval labels against the subset oracle".into(),
    );
    expect(
        naive_labels(s, &rho) == swapped_all(&naive_labels(s, &sigma)),
        "both layers swapped".into(),
    );

    verdict(
        6,
        "golden example images and labels",
        &failures,
        start.elapsed(),
        SEQ_BUDGET_FAST,
    );
}

fn envelope(k: usize) -> String {
    let mut arcs = vec![format!("1-{}", 2 * k)];
    arcs.extend((1..k).map(|i| format!("{}-{}", 2 * i, 2 * i + 1)));
    format!("M n={}; {}", 2 * k, arcs.join(","))
}

#[test]
fn criterion_7_enveloping_arcs_are_rejected() {
    let start = Instant::now();
    let oracle = RoleOracle::new();
    let mut failures = Vec::new();
    for (k, inner) in [(4usize, 3usize), (5, 4)] {
        let text = envelope(k);
        let (c, d) = parse(&text).unwrap();
        let report = is_admissible(c, &d).unwrap();
        let reason = format!("enveloping arc spans {inner} indecomposable intervals");
        if report.admissible || oracle.admissible(c, &d) {
            failures.push(format!("{text} accepted"));
        }
        if !report
            .reason
            .as_deref()
            .is_some_and(|r| r.contains(&reason))
        {
            failures.push(format!("{text}: reason {:?}", report.reason));
        }
        if ptr(c, &d).is_ok() {
            failures.push(format!("{text}: transform did not refuse"));
        }
    }
    // Two enclosed intervals are still one OCOC interval.
    let (c, d) = parse(&envelope(3)).unwrap();
    if !is_admissible(c, &d).unwrap().admissible {
        failures.push("two enclosed intervals rejected".into());
    }
    verdict(
        7,
        "arcs enveloping three or more intervals are rejected",
        &failures,
        start.elapsed(),
        SEQ_BUDGET_FAST,
    );
}

#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();
    let oracle = RoleOracle::new();
    let mut failures = Vec::new();

    // Matchings without a 2-crossing are counted by Catalan numbers.
    for (n, &want) in CATALAN.iter().enumerate() {
        let got = common::involutions(2 * n)
            .into_iter()
            .filter(|d| d.loops().is_empty())
            .filter(|d| naive_label(d.upper(), false).crossings(2) == 0)
            .count() as u64;
        if got != want {
            failures.push(format!("noncrossing matchings on {} points: {got}", 2 * n));
        }
    }

    // Pair classes, roles and intervals under the transform.
    for (c, max_n) in [
        (class(ClassKind::Matching, false), 8),
        (class(ClassKind::Matching, true), 8),
        (class(ClassKind::SetPartition, false), 7),
        (class(ClassKind::SetPartition, true), 7),
    ] {
        for n in 0..=max_n {
            for d in all_objects(c.kind, n) {
                if !oracle.admissible(c, &d) {
                    continue;
                }
                let e = ptr(c, &d).unwrap();
                let text = serialize(c.kind, &d);
                let arcs_d = upper_arcs(&d);
                let arcs_e = upper_arcs(&e);
                let (pd, pe) = (
                    pair_counts(&arcs_d, c.enhanced),
                    pair_counts(&arcs_e, c.enhanced),
                );
                if pd.crossings != pe.nestings
                    || pd.nestings != pe.crossings
                    || pd.alignments != pe.alignments
                {
                    failures.push(format!("pair classes on {text}: {pd:?} -> {pe:?}"));
                }
                let counted =
                    |a: &[Arc]| a.iter().filter(|x| c.enhanced || x.open != x.close).count();
                let m = counted(&arcs_d) as u128;
                let l = naive_label(&arcs_d, c.enhanced);
                if counted(&arcs_e) != counted(&arcs_d)
                    || pd.alignments != m * m.saturating_sub(1) / 2 - l.nestings(2) - l.crossings(2)
                {
                    failures.push(format!("pair conservation on {text}"));
                }
                let (rd, re) = (is_admissible(c, &d).unwrap(), is_admissible(c, &e).unwrap());
                if rd.intervals != re.intervals {
                    failures.push(format!("intervals change on {text}"));
                }
                let inflated_roles = |x: &ArcDiagram| {
                    let a = analyze_layer(x, c.enhanced).unwrap();
                    a.inflated.roles(arcnest::diagram::Layer::Upper)
                };
                if inflated_roles(&d) != inflated_roles(&e) {
                    failures.push(format!("inflated roles change on {text}"));
                }
            }
        }
    }

    // Joint distribution symmetry on admissible objects, for every
    // population the transform maps into itself.
    let tables = [
        (Population::PerfectMatchings, 8, false),
        (Population::PerfectMatchings, 8, true),
        (Population::PartialMatchings, 8, false),
        (Population::SetPartitions, 8, false),
        (Population::SetPartitions, 8, true),
        (Population::Permutations, 6, true),
    ];
    for (pop, max_n, enhanced) in tables {
        for n in 0..=max_n {
            if let Err(e) = joint_table(pop, n, enhanced, true) {
                failures.push(e.to_string());
            }
        }
    }

    verdict(
        8,
        "Catalan count, pair conservation, role and interval preservation, table symmetry",
        &failures,
        start.elapsed(),
        SWEEP_BUDGET,
    );
}
