//! Counting admissible objects: generating functions, exhaustive oracles,
//! joint crossing/nesting tables and involution sweeps.

pub mod brute;
pub mod series;

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bijection::ptr;
use crate::diagram::{serialize, ArcDiagram, ClassKind, ObjectClass};
use crate::stats::{label_of, max_crossing, max_nesting};
use crate::structure::is_admissible;
pub use brute::{class_of, fold_objects, for_each_object, objects, Population};
use series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("size {n} exceeds the exhaustive limit {limit} for {population:?}")]
    TooLarge {
        population: Population,
        n: usize,
        limit: usize,
    },
    #[error("no generating function is available for {0}")]
    NoSeries(ClassKind),
    #[error("joint table for {population:?} at size {n} is not symmetric")]
    Asymmetric { population: Population, n: usize },
}

fn guard(pop: Population, n: usize) -> Result<(), EnumError> {
    if n > pop.limit() {
        return Err(EnumError::TooLarge {
            population: pop,
            n,
            limit: pop.limit(),
        });
    }
    Ok(())
}

/// Counts of admissible objects indexed by size from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceResult {
    pub class: ObjectClass,
    pub terms: Vec<BigInt>,
}

impl SequenceResult {
    /// The terms as a JSON array of integers.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        format!("[{}]", body.join(","))
    }

    /// Index/value pairs, one per line.
    pub fn to_b_file(&self) -> String {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{i} {t}\n"))
            .collect()
    }
}

fn fixed_point(bound: usize) -> TruncatedSeries {
    TruncatedSeries::monomial(bound, [0, 0, 0, 1], 1, BigInt::from(1))
}

fn sequence(
    class: ObjectClass,
    terms: usize,
    f: impl Fn(usize) -> TruncatedSeries,
) -> SequenceResult {
    let mut out = match terms {
        0 => Vec::new(),
        t => f(t - 1).geometric().specialize(),
    };
    out.truncate(terms);
    SequenceResult { class, terms: out }
}

/// Partial matchings: sequences of fixed points, OC and OCOC intervals.
pub fn seq_matchings(terms: usize) -> SequenceResult {
    sequence(ObjectClass::new(ClassKind::Matching, false), terms, |b| {
        &(&fixed_point(b) + &series::series_o(b)) + &series::series_t(b)
    })
}

pub fn seq_enhanced_matchings(terms: usize) -> SequenceResult {
    sequence(ObjectClass::new(ClassKind::Matching, true), terms, |b| {
        &(&fixed_point(b) + &series::series_o_e(b)) + &series::series_t_e(b)
    })
}

pub fn seq_set_partitions(terms: usize) -> SequenceResult {
    sequence(
        ObjectClass::new(ClassKind::SetPartition, false),
        terms,
        series::series_n_s,
    )
}

pub fn seq_enhanced_set_partitions(terms: usize) -> SequenceResult {
    sequence(
        ObjectClass::new(ClassKind::SetPartition, true),
        terms,
        |b| {
            let point = TruncatedSeries::monomial(b, [0; 4], 1, BigInt::from(1));
            &(&point + &series::series_o_se(b)) + &series::series_t_se(b)
        },
    )
}

/// The generating-function sequence of a class, where one exists.
pub fn sequence_for(class: ObjectClass, terms: usize) -> Result<SequenceResult, EnumError> {
    match (class.kind, class.enhanced) {
        (ClassKind::Matching, false) => Ok(seq_matchings(terms)),
        (ClassKind::Matching, true) => Ok(seq_enhanced_matchings(terms)),
        (ClassKind::SetPartition, false) => Ok(seq_set_partitions(terms)),
        (ClassKind::SetPartition, true) => Ok(seq_enhanced_set_partitions(terms)),
        (ClassKind::Permutation, _) => Err(EnumError::NoSeries(ClassKind::Permutation)),
    }
}

fn admissible(class: ObjectClass, d: &ArcDiagram) -> bool {
    is_admissible(class, d).is_ok_and(|r| r.admissible)
}

/// Number of admissible objects of size `n`, by exhaustive enumeration.
pub fn brute_force_count(class: ObjectClass, n: usize) -> Result<u64, EnumError> {
    let pop = Population::of(class.kind);
    guard(pop, n)?;
    Ok(fold_objects(
        pop,
        n,
        || 0u64,
        |c, d| *c += u64::from(admissible(class, &d)),
        |a, b| a + b,
    ))
}

/// Brute-force counts for sizes `0..terms`, in the same shape as the
/// generating-function output.
pub fn brute_force_sequence(class: ObjectClass, terms: usize) -> Result<SequenceResult, EnumError> {
    let counts = (0..terms)
        .map(|n| brute_force_count(class, n).map(BigInt::from))
        .collect::<Result<_, _>>()?;
    Ok(SequenceResult {
        class,
        terms: counts,
    })
}

/// `rows[cr][ne]` counts objects with maximal crossing `cr` and maximal
/// nesting `ne`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointTable {
    pub rows: Vec<Vec<u64>>,
}

impl JointTable {
    pub fn get(&self, cr: usize, ne: usize) -> u64 {
        self.rows
            .get(cr)
            .and_then(|r| r.get(ne))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flatten().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.rows.len();
        (0..m).all(|i| (0..m).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn bump(&mut self, cr: usize, ne: usize) {
        let m = self.rows.len().max(cr + 1).max(ne + 1);
        for r in &mut self.rows {
            r.resize(m, 0);
        }
        self.rows.resize(m, vec![0; m]);
        self.rows[cr][ne] += 1;
    }

    fn merge(mut self, other: JointTable) -> JointTable {
        for (i, r) in other.rows.iter().enumerate() {
            for (j, &c) in r.iter().enumerate() {
                if c > 0 {
                    self.bump(i, j);
                    self.rows[i][j] += c - 1;
                }
            }
        }
        self
    }
}

/// Joint distribution of maximal crossing and nesting numbers. With
/// `admissible_only`, symmetry is a consequence of the involution and a
/// failure is reported as an error.
pub fn joint_table(
    pop: Population,
    n: usize,
    enhanced: bool,
    admissible_only: bool,
) -> Result<JointTable, EnumError> {
    guard(pop, n)?;
    let class = class_of(pop, enhanced);
    let table = fold_objects(
        pop,
        n,
        || JointTable { rows: Vec::new() },
        |t, d| {
            if !admissible_only || admissible(class, &d) {
                t.bump(max_crossing(class, &d), max_nesting(class, &d));
            }
        },
        JointTable::merge,
    );
    if admissible_only && !table.is_symmetric() {
        return Err(EnumError::Asymmetric { population: pop, n });
    }
    Ok(table)
}

/// Outcome of an exhaustive involution and label-swap sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub class: ClassKind,
    pub enhanced: bool,
    pub min_n: usize,
    pub max_n: usize,
    pub scanned: u64,
    pub admissible: u64,
    pub involution_failures: Vec<String>,
    pub label_swap_failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.involution_failures.is_empty() && self.label_swap_failures.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    scanned: u64,
    admissible: u64,
    involution: Vec<String>,
    label: Vec<String>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.scanned += o.scanned;
        self.admissible += o.admissible;
        self.involution.extend(o.involution);
        self.label.extend(o.label);
        self
    }
}

fn check_one(class: ObjectClass, d: ArcDiagram, t: &mut Tally) {
    t.scanned += 1;
    if !admissible(class, &d) {
        return;
    }
    t.admissible += 1;
    let text = serialize(class.kind, &d);
    let Ok(image) = ptr(class, &d) else {
        t.involution.push(text);
        return;
    };
    if ptr(class, &image).as_ref() != Ok(&d) {
        t.involution.push(text.clone());
    }
    if label_of(class, &image) != label_of(class, &d).swapped() {
        t.label.push(text);
    }
}

/// Applies the involution to every admissible object of sizes
/// `0..=max_n` and checks that it squares to the identity and swaps labels.
pub fn check(class: ObjectClass, max_n: usize) -> Result<CheckReport, EnumError> {
    let pop = Population::of(class.kind);
    guard(pop, max_n)?;
    let start = Instant::now();
    let tally = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            fold_objects(
                pop,
                n,
                Tally::default,
                |t, d| check_one(class, d, t),
                Tally::merge,
            )
        })
        .reduce(Tally::default, Tally::merge);
    let mut involution = tally.involution;
    let mut label = tally.label;
    involution.sort();
    label.sort();
    Ok(CheckReport {
        class: class.kind,
        enhanced: class.enhanced,
        min_n: 0,
        max_n,
        scanned: tally.scanned,
        admissible: tally.admissible,
        involution_failures: involution,
        label_swap_failures: label,
        elapsed_ms: Some(start.elapsed().as_millis()),
    })
}
