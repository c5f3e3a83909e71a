//! Exhaustive generation of small objects, sharded for parallel scans.
//!
//! Each population is produced by a depth-first search over partial
//! objects. The search is cut at a fixed depth; the partial objects found
//! there are the shards handed to worker threads, and every reduction used
//! on top of them is order independent.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{Arc, ArcDiagram, ClassKind, ObjectClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Population {
    /// All involutions of `[n]`, fixed points drawn as loops.
    PartialMatchings,
    /// Fixed-point-free involutions of `[n]`.
    PerfectMatchings,
    SetPartitions,
    Permutations,
}

impl Population {
    pub fn of(kind: ClassKind) -> Self {
        match kind {
            ClassKind::Matching => Population::PartialMatchings,
            ClassKind::SetPartition => Population::SetPartitions,
            ClassKind::Permutation => Population::Permutations,
        }
    }

    pub fn kind(self) -> ClassKind {
        match self {
            Population::PartialMatchings | Population::PerfectMatchings => ClassKind::Matching,
            Population::SetPartitions => ClassKind::SetPartition,
            Population::Permutations => ClassKind::Permutation,
        }
    }

    /// Largest size accepted by exhaustive scans.
    pub fn limit(self) -> usize {
        match self {
            Population::PartialMatchings | Population::PerfectMatchings => 14,
            Population::SetPartitions => 12,
            Population::Permutations => 10,
        }
    }
}

/// A partial object: `a[i]` for the first `a.len()` positions.
///
/// * matchings: partner of each vertex (0-based), filled left to right with
///   `usize::MAX` for "not yet decided";
/// * set partitions: restricted growth string;
/// * permutations: one-line prefix.
#[derive(Clone, Debug)]
struct Partial {
    a: Vec<usize>,
}

fn children(pop: Population, n: usize, p: &Partial) -> Vec<Partial> {
    match pop {
        Population::PartialMatchings | Population::PerfectMatchings => {
            let Some(i) = p.a.iter().position(|&x| x == usize::MAX) else {
                return Vec::new();
            };
            let mut out = Vec::new();
            if pop == Population::PartialMatchings {
                let mut q = p.clone();
                q.a[i] = i;
                out.push(q);
            }
            for j in i + 1..n {
                if p.a[j] == usize::MAX {
                    let mut q = p.clone();
                    q.a[i] = j;
                    q.a[j] = i;
                    out.push(q);
                }
            }
            out
        }
        Population::SetPartitions => {
            if p.a.len() == n {
                return Vec::new();
            }
            let top = p.a.iter().copied().max().map_or(0, |m| m + 1);
            (0..=top)
                .map(|b| {
                    let mut q = p.clone();
                    q.a.push(b);
                    q
                })
                .collect()
        }
        Population::Permutations => {
            if p.a.len() == n {
                return Vec::new();
            }
            (0..n)
                .filter(|v| !p.a.contains(v))
                .map(|v| {
                    let mut q = p.clone();
                    q.a.push(v);
                    q
                })
                .collect()
        }
    }
}

fn is_complete(pop: Population, n: usize, p: &Partial) -> bool {
    match pop {
        Population::PartialMatchings | Population::PerfectMatchings => !p.a.contains(&usize::MAX),
        _ => p.a.len() == n,
    }
}

fn root(pop: Population, n: usize) -> Partial {
    match pop {
        Population::PartialMatchings | Population::PerfectMatchings => Partial {
            a: vec![usize::MAX; n],
        },
        _ => Partial { a: Vec::new() },
    }
}

fn build(pop: Population, n: usize, p: &Partial) -> ArcDiagram {
    match pop {
        Population::PartialMatchings | Population::PerfectMatchings => {
            let arcs = (0..n)
                .filter(|&i| p.a[i] > i)
                .map(|i| Arc::new(i + 1, p.a[i] + 1))
                .collect();
            ArcDiagram::single_layer(n, arcs).expect("involution is a valid matching")
        }
        Population::SetPartitions => {
            let mut last: BTreeMap<usize, usize> = BTreeMap::new();
            let mut arcs = Vec::new();
            for (i, &b) in p.a.iter().enumerate() {
                if let Some(prev) = last.insert(b, i + 1) {
                    arcs.push(Arc::new(prev, i + 1));
                }
            }
            ArcDiagram::single_layer(n, arcs).expect("growth string is a valid partition")
        }
        Population::Permutations => {
            let sigma: Vec<usize> = p.a.iter().map(|v| v + 1).collect();
            ArcDiagram::from_permutation(&sigma, None).expect("valid permutation")
        }
    }
}

fn walk(pop: Population, n: usize, p: Partial, f: &mut dyn FnMut(ArcDiagram)) {
    if is_complete(pop, n, &p) {
        f(build(pop, n, &p));
        return;
    }
    for c in children(pop, n, &p) {
        walk(pop, n, c, f);
    }
}

fn shards(pop: Population, n: usize, depth: usize) -> Vec<Partial> {
    let mut frontier = vec![root(pop, n)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in frontier {
            if is_complete(pop, n, &p) {
                next.push(p);
            } else {
                next.extend(children(pop, n, &p));
            }
        }
        frontier = next;
    }
    frontier
}

/// Every object of size `n`, sequentially, in a fixed order.
pub fn for_each_object(pop: Population, n: usize, mut f: impl FnMut(ArcDiagram)) {
    walk(pop, n, root(pop, n), &mut f);
}

/// All objects of size `n` collected in generation order.
pub fn objects(pop: Population, n: usize) -> Vec<ArcDiagram> {
    let mut out = Vec::new();
    for_each_object(pop, n, |d| out.push(d));
    out
}

/// Parallel map-reduce over every object of size `n`. `combine` must be
/// associative and commutative for the result to be schedule independent.
pub fn fold_objects<A, Init, Fold, Combine>(
    pop: Population,
    n: usize,
    init: Init,
    fold: Fold,
    combine: Combine,
) -> A
where
    A: Send,
    Init: Fn() -> A + Sync + Send,
    Fold: Fn(&mut A, ArcDiagram) + Sync + Send,
    Combine: Fn(A, A) -> A + Sync + Send,
{
    shards(pop, n, 2)
        .into_par_iter()
        .map(|p| {
            let mut acc = init();
            walk(pop, n, p, &mut |d| fold(&mut acc, d));
            acc
        })
        .reduce(&init, &combine)
}

/// The class under which a population is scanned.
pub fn class_of(pop: Population, enhanced: bool) -> ObjectClass {
    ObjectClass::new(pop.kind(), enhanced || pop == Population::Permutations)
}
