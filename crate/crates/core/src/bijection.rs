//! Label-reversal involutions that exchange crossings and nestings.
//!
//! An `OC` interval is handled by reversing the labels of all its closers.
//! An `OCOC` interval uses the triple reversal: reverse the first opener
//! block, reverse the last closer block, then reverse the closers of the
//! connecting arcs among themselves. Set partitions and enhanced diagrams go
//! through inflation first; permutations are split into halves that are
//! transformed independently and stitched back together.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Arc, ArcDiagram, ClassKind, DiagramError, ObjectClass, Vertex};
use crate::structure::{
    analyze_layer, is_admissible, is_admissible_per_colour, split_permutation, stitch_permutation,
    AdmissibilityReport, BlockType, Interval, StructureError,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("diagram is not admissible: {}", .0.reason.as_deref().unwrap_or("unknown reason"))]
    Inadmissible(Box<AdmissibilityReport>),
    #[error("cannot transform an inadmissible interval")]
    InadmissibleBlock,
    #[error("colour {0} does not form a permutation on its own vertices")]
    ColourClassNotPermutation(crate::diagram::Colour),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Which endpoints of the connecting arcs the last reversal acts on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Step4 {
    #[default]
    Closers,
    /// Experimental alternative, exposed for comparison only.
    Openers,
}

/// How colours interact with admissibility and the transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum ColourSemantics {
    /// Colours ride along with the arcs of the underlying diagram.
    #[default]
    WholeDiagram,
    /// Each colour class is transformed on its own and the results merged.
    PerColourClass,
}

/// Relabels every endpoint found in `positions` by the order-reversal of
/// that set, then renormalizes and sorts the arcs.
pub fn reverse_positions(arcs: &[Arc], positions: &[Vertex]) -> Vec<Arc> {
    let mut ps = positions.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let m = ps.len();
    let flip = |v: Vertex| match ps.binary_search(&v) {
        Ok(i) => ps[m - 1 - i],
        Err(_) => v,
    };
    let mut out: Vec<Arc> = arcs
        .iter()
        .map(|a| {
            let (x, y) = (flip(a.open), flip(a.close));
            Arc::coloured(x.min(y), x.max(y), a.colour)
        })
        .collect();
    out.sort();
    out
}

/// The sequence of position sets reversed on one interval.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReversalPlan {
    pub steps: Vec<Vec<Vertex>>,
}

impl ReversalPlan {
    /// Applies the first `count` steps.
    pub fn apply_first(&self, arcs: &[Arc], count: usize) -> Vec<Arc> {
        let mut cur = arcs.to_vec();
        cur.sort();
        for s in self.steps.iter().take(count) {
            cur = reverse_positions(&cur, s);
        }
        cur
    }

    pub fn apply(&self, arcs: &[Arc]) -> Vec<Arc> {
        self.apply_first(arcs, self.steps.len())
    }
}

/// Endpoint role runs of a set of arcs, as position lists.
fn endpoint_runs(arcs: &[Arc]) -> Vec<(bool, Vec<Vertex>)> {
    let mut ends: Vec<(Vertex, bool)> = arcs
        .iter()
        .flat_map(|a| [(a.open, true), (a.close, false)])
        .collect();
    ends.sort_unstable();
    let mut runs: Vec<(bool, Vec<Vertex>)> = Vec::new();
    for (p, is_open) in ends {
        match runs.last_mut() {
            Some((o, ps)) if *o == is_open => ps.push(p),
            _ => runs.push((is_open, vec![p])),
        }
    }
    runs
}

/// Builds the reversal plan of one interval of an inflated diagram.
pub fn plan_interval(
    arcs: &[Arc],
    block: BlockType,
    step4: Step4,
) -> Result<ReversalPlan, BijectionError> {
    match block {
        BlockType::Inadmissible => Err(BijectionError::InadmissibleBlock),
        BlockType::P => Ok(ReversalPlan::default()),
        BlockType::OC => Ok(ReversalPlan {
            steps: vec![arcs.iter().map(|a| a.close).collect()],
        }),
        BlockType::OCOC { .. } => {
            let runs = endpoint_runs(arcs);
            if runs.len() != 4 {
                return Err(BijectionError::InadmissibleBlock);
            }
            let first = runs[0].1.clone();
            let last = runs[3].1.clone();
            let mut plan = ReversalPlan {
                steps: vec![first.clone(), last.clone()],
            };
            let after = plan.apply(arcs);
            let connecting = after
                .iter()
                .filter(|a| first.contains(&a.open) && last.contains(&a.close));
            plan.steps.push(match step4 {
                Step4::Closers => connecting.map(|a| a.close).collect(),
                Step4::Openers => connecting.map(|a| a.open).collect(),
            });
            Ok(plan)
        }
    }
}

/// Transforms the arcs of one interval of an inflated diagram.
pub fn ptr_interval(
    arcs: &[Arc],
    block: BlockType,
    step4: Step4,
) -> Result<Vec<Arc>, BijectionError> {
    Ok(plan_interval(arcs, block, step4)?.apply(arcs))
}

/// Transforms a single-layer diagram under the given semantics.
pub fn ptr_layer(
    d: &ArcDiagram,
    enhanced: bool,
    step4: Step4,
) -> Result<ArcDiagram, BijectionError> {
    let analysis = analyze_layer(d, enhanced)?;
    if !analysis.admissible() {
        return Err(BijectionError::Inadmissible(Box::new(analysis.report())));
    }
    let mut image = Vec::with_capacity(analysis.inflated.upper().len());
    for &(iv, block) in &analysis.blocks {
        let arcs = arcs_in(analysis.inflated.upper(), iv);
        image.extend(ptr_interval(&arcs, block, step4)?);
    }
    let inflated = analysis.inflated.with_upper(image)?;
    Ok(crate::structure::deflate(&inflated, &analysis.map)?)
}

fn arcs_in(arcs: &[Arc], iv: Interval) -> Vec<Arc> {
    arcs.iter()
        .copied()
        .filter(|a| iv.contains(a.open))
        .collect()
}

/// The crossing/nesting involution on an admissible diagram of the class.
///
/// The map always squares to the identity. Full labels are exchanged when
/// every OCOC interval has at most two connecting arcs; with three or more
/// the exchange can fail, e.g. `M n=10; 1-10,2-5,3-7,4-8,6-9` goes from
/// (4; 5,2) to (5,1; 4).
pub fn ptr(class: ObjectClass, d: &ArcDiagram) -> Result<ArcDiagram, BijectionError> {
    ptr_with(class, d, Step4::Closers)
}

pub fn ptr_with(
    class: ObjectClass,
    d: &ArcDiagram,
    step4: Step4,
) -> Result<ArcDiagram, BijectionError> {
    match class.kind {
        ClassKind::Permutation => {
            let report = is_admissible(class, d)?;
            if !report.admissible {
                return Err(BijectionError::Inadmissible(Box::new(report)));
            }
            let (up, lo) = split_permutation(d)?;
            let up = ptr_layer(&up, true, step4)?;
            let lo = ptr_layer(&lo, false, step4)?;
            Ok(stitch_permutation(&up, &lo)?)
        }
        _ => ptr_layer(d, class.enhanced, step4),
    }
}

/// Coloured variant. Under [`ColourSemantics::WholeDiagram`] this is [`ptr`]
/// with colours carried by the arcs. Under
/// [`ColourSemantics::PerColourClass`] every colour class must be admissible
/// on its own (and, for permutations, form a permutation of its vertices);
/// each class is transformed separately and the images are merged.
pub fn ptr_coloured(
    class: ObjectClass,
    d: &ArcDiagram,
    semantics: ColourSemantics,
) -> Result<ArcDiagram, BijectionError> {
    match semantics {
        ColourSemantics::WholeDiagram => ptr(class, d),
        ColourSemantics::PerColourClass => {
            if class.kind == ClassKind::Permutation {
                check_colour_cycles(d)?;
            }
            let report = is_admissible_per_colour(class, d)?;
            if !report.admissible {
                return Err(BijectionError::Inadmissible(Box::new(report)));
            }
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            let mut loops = std::collections::BTreeMap::new();
            for c in d.colours() {
                let part = d.restrict_colour(c);
                let image = match class.kind {
                    ClassKind::Permutation => {
                        let (up, lo) = split_permutation(&part)?;
                        let up = ptr_layer(&up, true, Step4::Closers)?;
                        let lo = ptr_layer(&lo, false, Step4::Closers)?;
                        ArcDiagram::new(
                            d.n(),
                            up.upper().to_vec(),
                            lo.upper().to_vec(),
                            up.loops().clone(),
                        )?
                    }
                    _ => ptr_layer(&part, class.enhanced, Step4::Closers)?,
                };
                upper.extend_from_slice(image.upper());
                lower.extend_from_slice(image.lower());
                loops.extend(image.loops().iter().map(|(&v, &c)| (v, c)));
            }
            let merged = ArcDiagram::new(d.n(), upper, lower, loops)?;
            if class.kind == ClassKind::Permutation {
                merged.permutation()?;
            }
            Ok(merged)
        }
    }
}

/// Every vertex must enter and leave through arcs of the same colour.
fn check_colour_cycles(d: &ArcDiagram) -> Result<(), BijectionError> {
    let sigma = d.permutation()?;
    for &(target, c) in &sigma {
        if sigma[target - 1].1 != c {
            return Err(BijectionError::ColourClassNotPermutation(c));
        }
    }
    Ok(())
}
