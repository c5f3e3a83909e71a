//! k-crossing and k-nesting statistics.
//!
//! Counting works on "fine positions": every endpoint at vertex `v` is mapped
//! to `2v` or `2v + 1`. Under enhanced semantics an opener at `v` precedes a
//! closer at `v` (so loops and upper transitories behave as an opener then a
//! closer); otherwise the closer comes first. Chains are then counted with
//! strict inequalities on the fine positions, which is the same as counting
//! ordinary crossings and nestings on the inflated diagram.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Arc, ArcDiagram, ClassKind, Colour, ObjectClass};

pub type Count = u128;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("k must be at least 2, got {0}")]
    KTooSmall(usize),
}

/// Counts of k-nestings and k-crossings, indexed from k = 2, trailing zeros
/// trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Label {
    pub nest: Vec<Count>,
    pub cross: Vec<Count>,
}

impl Label {
    pub fn new(mut nest: Vec<Count>, mut cross: Vec<Count>) -> Self {
        trim(&mut nest);
        trim(&mut cross);
        Label { nest, cross }
    }

    /// Number of k-nestings.
    pub fn nestings(&self, k: usize) -> Count {
        k.checked_sub(2)
            .and_then(|i| self.nest.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// Number of k-crossings.
    pub fn crossings(&self, k: usize) -> Count {
        k.checked_sub(2)
            .and_then(|i| self.cross.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn swapped(&self) -> Label {
        Label {
            nest: self.cross.clone(),
            cross: self.nest.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nest.is_empty() && self.cross.is_empty()
    }

    fn accumulate(&mut self, other: &Label) {
        add_into(&mut self.nest, &other.nest);
        add_into(&mut self.cross, &other.cross);
    }
}

fn trim(v: &mut Vec<Count>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn add_into(acc: &mut Vec<Count>, v: &[Count]) {
    if acc.len() < v.len() {
        acc.resize(v.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

/// Label of a permutation: enhanced counts on the upper layer, plain counts
/// on the lower layer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PermLabel {
    pub upper: Label,
    pub lower: Label,
}

impl PermLabel {
    pub fn swapped(&self) -> PermLabel {
        PermLabel {
            upper: self.upper.swapped(),
            lower: self.lower.swapped(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum DiagramLabel {
    Single(Label),
    Perm(PermLabel),
}

impl DiagramLabel {
    pub fn swapped(&self) -> DiagramLabel {
        match self {
            DiagramLabel::Single(l) => DiagramLabel::Single(l.swapped()),
            DiagramLabel::Perm(l) => DiagramLabel::Perm(l.swapped()),
        }
    }
}

/// Fine position pairs for a list of arcs. Degenerate arcs (`open == close`)
/// stand for loops and are dropped unless `enhanced`.
fn fine_points(arcs: &[Arc], enhanced: bool) -> Vec<(usize, usize)> {
    let mut pts: Vec<(usize, usize)> = arcs
        .iter()
        .filter(|a| enhanced || a.open != a.close)
        .map(|a| {
            if enhanced {
                (2 * a.open, 2 * a.close + 1)
            } else {
                (2 * a.open + 1, 2 * a.close)
            }
        })
        .collect();
    pts.sort_unstable();
    pts
}

/// All chain counts for one monochromatic arc set. Entry `i` of each vector
/// is the number of `(i + 2)`-chains.
fn chain_counts(pts: &[(usize, usize)]) -> Label {
    let m = pts.len();
    if m < 2 {
        return Label::default();
    }

    // Nestings form a partial order: count chains ending at each arc.
    let mut nest = vec![0 as Count; m + 1];
    let mut dp: Vec<Vec<Count>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0 as Count; m + 1];
        row[1] = 1;
        for h in 0..i {
            if pts[h].0 < pts[i].0 && pts[i].1 < pts[h].1 {
                for len in 2..=h + 2 {
                    row[len] += dp[h][len - 1];
                }
            }
        }
        for len in 2..=m {
            nest[len] += row[len];
        }
        dp.push(row);
    }

    // Crossings are not transitive; anchor each chain at its leftmost arc.
    // Every arc crossing the anchor from the right has its opener before the
    // anchor's closer and its closer after it, so the rest of the chain is an
    // increasing subsequence of closers among those arcs.
    let mut cross = vec![0 as Count; m + 1];
    for a in 0..m {
        let (oa, ca) = pts[a];
        let follow: Vec<usize> = pts[a + 1..]
            .iter()
            .filter(|&&(o, c)| o < ca && ca < c && oa < o)
            .map(|&(_, c)| c)
            .collect();
        let f = follow.len();
        let mut inc: Vec<Vec<Count>> = Vec::with_capacity(f);
        for i in 0..f {
            let mut row = vec![0 as Count; f + 1];
            row[1] = 1;
            for h in 0..i {
                if follow[h] < follow[i] {
                    for len in 2..=h + 2 {
                        row[len] += inc[h][len - 1];
                    }
                }
            }
            for len in 1..=f {
                cross[len + 1] += row[len];
            }
            inc.push(row);
        }
    }

    Label::new(nest[2..].to_vec(), cross[2..].to_vec())
}

fn by_colour(arcs: &[Arc]) -> BTreeMap<Colour, Vec<Arc>> {
    let mut groups: BTreeMap<Colour, Vec<Arc>> = BTreeMap::new();
    for a in arcs {
        groups.entry(a.colour).or_default().push(*a);
    }
    groups
}

/// Label of one layer given as an arc list (loops as `open == close`).
/// Chains are monochromatic; counts are summed over colour classes.
pub fn layer_label(arcs: &[Arc], enhanced: bool) -> Label {
    let mut total = Label::default();
    for group in by_colour(arcs).values() {
        total.accumulate(&chain_counts(&fine_points(group, enhanced)));
    }
    total
}

/// Number of k-crossings among `arcs`, ignoring colour.
pub fn count_k_crossings(arcs: &[Arc], k: usize, enhanced: bool) -> Result<Count, StatsError> {
    if k < 2 {
        return Err(StatsError::KTooSmall(k));
    }
    Ok(chain_counts(&fine_points(arcs, enhanced)).crossings(k))
}

/// Number of k-nestings among `arcs`, ignoring colour.
pub fn count_k_nestings(arcs: &[Arc], k: usize, enhanced: bool) -> Result<Count, StatsError> {
    if k < 2 {
        return Err(StatsError::KTooSmall(k));
    }
    Ok(chain_counts(&fine_points(arcs, enhanced)).nestings(k))
}

/// Upper arcs with loops appended as degenerate arcs.
pub(crate) fn upper_with_loops(d: &ArcDiagram) -> Vec<Arc> {
    let mut arcs = d.upper().to_vec();
    arcs.extend(d.loops().iter().map(|(&v, &c)| Arc::coloured(v, v, c)));
    arcs
}

pub fn label_of(class: ObjectClass, d: &ArcDiagram) -> DiagramLabel {
    match class.kind {
        ClassKind::Permutation => DiagramLabel::Perm(PermLabel {
            upper: layer_label(&upper_with_loops(d), true),
            lower: layer_label(d.lower(), false),
        }),
        _ => DiagramLabel::Single(layer_label(&upper_with_loops(d), class.enhanced)),
    }
}

fn counted_arcs(class: ObjectClass, d: &ArcDiagram) -> usize {
    let loops = if class.upper_enhanced() {
        d.loops().len()
    } else {
        0
    };
    d.arc_count() + loops
}

fn max_chain(v: &[Count], any_arc: bool) -> usize {
    if !v.is_empty() {
        v.len() + 1
    } else {
        usize::from(any_arc)
    }
}

/// Largest k with a k-crossing; 1 for a diagram with arcs but no 2-crossing
/// and 0 for an arcless one.
pub fn max_crossing(class: ObjectClass, d: &ArcDiagram) -> usize {
    let any = counted_arcs(class, d) > 0;
    match label_of(class, d) {
        DiagramLabel::Single(l) => max_chain(&l.cross, any),
        DiagramLabel::Perm(l) => max_chain(&l.upper.cross, any).max(max_chain(&l.lower.cross, any)),
    }
}

/// Largest k with a k-nesting, with the same conventions as [`max_crossing`].
pub fn max_nesting(class: ObjectClass, d: &ArcDiagram) -> usize {
    let any = counted_arcs(class, d) > 0;
    match label_of(class, d) {
        DiagramLabel::Single(l) => max_chain(&l.nest, any),
        DiagramLabel::Perm(l) => max_chain(&l.upper.nest, any).max(max_chain(&l.lower.nest, any)),
    }
}

/// Every unordered pair of arcs is exactly one of these.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub nestings: Count,
    pub crossings: Count,
    pub alignments: Count,
}

/// Classifies each pair of arcs directly, ignoring colour.
pub fn pair_counts(arcs: &[Arc], enhanced: bool) -> PairCounts {
    let pts = fine_points(arcs, enhanced);
    let mut out = PairCounts::default();
    for (i, &(_, c1)) in pts.iter().enumerate() {
        for &(o2, c2) in &pts[i + 1..] {
            if o2 < c1 && c1 < c2 {
                out.crossings += 1;
            } else if c2 < c1 {
                out.nestings += 1;
            } else {
                out.alignments += 1;
            }
        }
    }
    out
}
