//! Interval decomposition, inflation and admissibility.
//!
//! The bijection only applies to diagrams whose indecomposable intervals,
//! after inflation, each have one of three shapes:
//!
//! * `P`: a lone fixed point (or a lone loop under enhanced semantics);
//! * `OC`: a run of openers followed by a run of closers;
//! * `OCOC`: openers, closers, openers, closers, where the arcs leaving the
//!   first run close in the second or the fourth run and `n >= 1` of them
//!   connect the first run to the fourth.
//!
//! Inflation splits transitories (and, under enhanced semantics, loops) into
//! two adjacent vertices so that every remaining vertex has degree at most
//! one. Plain semantics split a transitory into closer-then-opener, which
//! disconnects chained blocks. Enhanced semantics split transitories and
//! loops into opener-then-closer, and such a pair is only allowed exactly at
//! an opener-to-closer switch.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    Arc, ArcDiagram, ClassKind, Colour, DiagramError, Layer, ObjectClass, Vertex, VertexRole,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("only the upper layer can be inflated; split the permutation first")]
    TwoLayers,
    #[error("inflated copies of vertex {0} are not adjacent in the expected orientation")]
    Orientation(Vertex),
    #[error("cannot stitch halves: {0}")]
    Stitch(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Inclusive vertex range of an indecomposable segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub lo: Vertex,
    pub hi: Vertex,
}

impl Interval {
    pub fn contains(&self, v: Vertex) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Maximal indecomposable intervals of one layer, found by sweeping a
/// vertical line across the gaps between consecutive vertices.
pub fn decompose(d: &ArcDiagram, layer: Layer) -> Vec<Interval> {
    cut_intervals(d.n(), d.arcs(layer))
}

fn cut_intervals(n: usize, arcs: &[Arc]) -> Vec<Interval> {
    // depth[v] = number of arcs covering the gap between v and v + 1
    let mut delta = vec![0i64; n + 2];
    for a in arcs {
        delta[a.open] += 1;
        delta[a.close] -= 1;
    }
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 1;
    for v in 1..=n {
        depth += delta[v];
        if depth == 0 {
            out.push(Interval { lo: start, hi: v });
            start = v + 1;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitKind {
    /// Plain-semantics transitory: closer copy, then opener copy.
    TransitoryCO,
    /// Enhanced-semantics transitory: opener copy, then closer copy.
    TransitoryOC,
    /// Enhanced loop: opener copy, then closer copy, joined by an arc.
    LoopOC,
}

impl SplitKind {
    fn opener_first(self) -> bool {
        !matches!(self, SplitKind::TransitoryCO)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Split {
    pub vertex: Vertex,
    pub kind: SplitKind,
    /// Position of the first copy in the inflated diagram; the second copy
    /// sits at `first + 1`.
    pub first: Vertex,
}

/// Reversible record of the vertex splits made by [`inflate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InflationMap {
    original_n: usize,
    enhanced: bool,
    splits: Vec<Split>,
    /// `origin[p]` is the original vertex behind inflated position `p`.
    origin: Vec<Vertex>,
}

impl InflationMap {
    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn enhanced(&self) -> bool {
        self.enhanced
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn is_identity(&self) -> bool {
        self.splits.is_empty()
    }

    /// Original vertex behind an inflated position.
    pub fn original(&self, pos: Vertex) -> Vertex {
        self.origin[pos]
    }

    /// Split whose pair starts at `pos`, if any.
    fn split_at(&self, pos: Vertex) -> Option<&Split> {
        self.splits
            .binary_search_by_key(&pos, |s| s.first)
            .ok()
            .map(|i| &self.splits[i])
    }
}

/// Inflates the upper layer of a single-layer diagram.
///
/// Plain semantics split each transitory into closer-then-opener and leave
/// loops alone (they are fixed points there). Enhanced semantics split each
/// transitory and each loop into opener-then-closer, the loop becoming an arc
/// between its two copies. Vertices without arcs stay as isolated vertices.
pub fn inflate(
    d: &ArcDiagram,
    enhanced: bool,
) -> Result<(ArcDiagram, InflationMap), StructureError> {
    if !d.lower().is_empty() {
        return Err(StructureError::TwoLayers);
    }
    let n = d.n();
    let roles = d.roles(Layer::Upper);
    let mut kind_of: Vec<Option<SplitKind>> = vec![None; n + 1];
    for v in 1..=n {
        kind_of[v] = match roles[v - 1] {
            VertexRole::Transitory if enhanced => Some(SplitKind::TransitoryOC),
            VertexRole::Transitory => Some(SplitKind::TransitoryCO),
            VertexRole::FixedPoint if enhanced && d.loops().contains_key(&v) => {
                Some(SplitKind::LoopOC)
            }
            _ => None,
        };
    }
    let mut pos = vec![0; n + 1];
    let mut origin = vec![0];
    let mut splits = Vec::new();
    for v in 1..=n {
        pos[v] = origin.len();
        origin.push(v);
        if let Some(kind) = kind_of[v] {
            splits.push(Split {
                vertex: v,
                kind,
                first: pos[v],
            });
            origin.push(v);
        }
    }
    let opener_pos = |v: Vertex| match kind_of[v] {
        Some(k) if !k.opener_first() => pos[v] + 1,
        _ => pos[v],
    };
    let closer_pos = |v: Vertex| match kind_of[v] {
        Some(k) if k.opener_first() => pos[v] + 1,
        _ => pos[v],
    };
    let mut arcs: Vec<Arc> = d
        .upper()
        .iter()
        .map(|a| Arc::coloured(opener_pos(a.open), closer_pos(a.close), a.colour))
        .collect();
    let mut loops = std::collections::BTreeMap::new();
    for (&v, &c) in d.loops() {
        if enhanced {
            arcs.push(Arc::coloured(pos[v], pos[v] + 1, c));
        } else {
            loops.insert(pos[v], c);
        }
    }
    let inflated = ArcDiagram::new(origin.len() - 1, arcs, Vec::new(), loops)?;
    Ok((
        inflated,
        InflationMap {
            original_n: n,
            enhanced,
            splits,
            origin,
        },
    ))
}

/// Merges every split pair back into one vertex.
///
/// Each pair must still hold the orientation of its split kind. An
/// opener-then-closer pair joined by one arc becomes a loop; otherwise it
/// becomes a transitory. Loops and transitories may therefore trade places
/// relative to the diagram that was inflated.
pub fn deflate(inflated: &ArcDiagram, map: &InflationMap) -> Result<ArcDiagram, StructureError> {
    let roles = inflated.roles(Layer::Upper);
    for s in &map.splits {
        let (a, b) = (roles[s.first - 1], roles[s.first]);
        let ok = if s.kind.opener_first() {
            a == VertexRole::Opener && b == VertexRole::Closer
        } else {
            a == VertexRole::Closer && b == VertexRole::Opener
        };
        if !ok {
            return Err(StructureError::Orientation(s.vertex));
        }
    }
    let mut arcs = Vec::with_capacity(inflated.upper().len());
    let mut loops = std::collections::BTreeMap::new();
    for a in inflated.upper() {
        let (o, c) = (map.original(a.open), map.original(a.close));
        if o == c {
            loops.insert(o, a.colour);
        } else {
            arcs.push(Arc::coloured(o, c, a.colour));
        }
    }
    for (&p, &c) in inflated.loops() {
        loops.insert(map.original(p), c);
    }
    Ok(ArcDiagram::new(map.original_n, arcs, Vec::new(), loops)?)
}

/// Shape of one indecomposable interval of an inflated diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type")]
pub enum BlockType {
    P,
    OC,
    /// `n` connecting arcs, `k` arcs inside the first sub-block, `j` inside
    /// the second (all counted on the inflated diagram).
    OCOC {
        n: usize,
        k: usize,
        j: usize,
    },
    Inadmissible,
}

impl BlockType {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, BlockType::Inadmissible)
    }
}

/// Maximal runs of equal roles, as `(role, positions)`.
fn role_runs(inflated: &ArcDiagram, iv: Interval) -> Vec<(VertexRole, Vec<Vertex>)> {
    let roles = inflated.roles(Layer::Upper);
    let mut runs: Vec<(VertexRole, Vec<Vertex>)> = Vec::new();
    for p in iv.lo..=iv.hi {
        let r = roles[p - 1];
        if r == VertexRole::FixedPoint {
            continue;
        }
        match runs.last_mut() {
            Some((last, ps)) if *last == r => ps.push(p),
            _ => runs.push((r, vec![p])),
        }
    }
    runs
}

fn pattern(runs: &[(VertexRole, Vec<Vertex>)]) -> String {
    runs.iter()
        .map(|(r, ps)| {
            let c = if *r == VertexRole::Opener { 'O' } else { 'C' };
            format!("{c}^{}", ps.len())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Classifies one interval of an inflated diagram, with the reason when it
/// is inadmissible.
fn classify_detailed(
    inflated: &ArcDiagram,
    map: &InflationMap,
    iv: Interval,
) -> (BlockType, Option<String>) {
    let runs = role_runs(inflated, iv);
    let here = |p: Vertex| map.original(p);
    if runs.is_empty() {
        return (BlockType::P, None);
    }
    if map.enhanced && iv.hi == iv.lo + 1 {
        if let Some(s) = map.split_at(iv.lo) {
            if s.kind == SplitKind::LoopOC && runs.len() == 2 {
                return (BlockType::P, None);
            }
        }
    }

    // Under enhanced semantics every opener-then-closer pair must sit at one
    // of the allowed opener-to-closer switches.
    let pairs_ok = |allowed: &[usize]| -> Option<String> {
        if !map.enhanced {
            return None;
        }
        for s in &map.splits {
            if !iv.contains(s.first) {
                continue;
            }
            let at_switch = allowed.iter().any(|&r| {
                runs[r].1.last() == Some(&s.first) && runs[r + 1].1.first() == Some(&(s.first + 1))
            });
            if !at_switch {
                return Some(format!(
                    "interval [{},{}]: inflated vertex {} is not at an opener-to-closer switch",
                    here(iv.lo),
                    here(iv.hi),
                    s.vertex
                ));
            }
        }
        None
    };

    let arcs: Vec<&Arc> = inflated
        .upper()
        .iter()
        .filter(|a| iv.contains(a.open))
        .collect();
    match runs.len() {
        2 => match pairs_ok(&[0]) {
            None => (BlockType::OC, None),
            Some(why) => (BlockType::Inadmissible, Some(why)),
        },
        4 => {
            let run_of = |p: Vertex| runs.iter().position(|(_, ps)| ps.contains(&p));
            let (mut k, mut j, mut n) = (0, 0, 0);
            for a in &arcs {
                match (run_of(a.open), run_of(a.close)) {
                    (Some(0), Some(1)) => k += 1,
                    (Some(2), Some(3)) => j += 1,
                    (Some(0), Some(3)) => n += 1,
                    _ => {
                        return (
                            BlockType::Inadmissible,
                            Some(format!(
                                "interval [{},{}]: arc {}-{} breaks the OCOC incidence",
                                here(iv.lo),
                                here(iv.hi),
                                here(a.open),
                                here(a.close)
                            )),
                        )
                    }
                }
            }
            if n == 0 {
                return (
                    BlockType::Inadmissible,
                    Some(format!(
                        "interval [{},{}]: no connecting arc",
                        here(iv.lo),
                        here(iv.hi)
                    )),
                );
            }
            match pairs_ok(&[0, 2]) {
                None => (BlockType::OCOC { n, k, j }, None),
                Some(why) => (BlockType::Inadmissible, Some(why)),
            }
        }
        _ => {
            let why = envelope_reason(&runs, &arcs, inflated.n()).unwrap_or_else(|| {
                format!(
                    "role pattern {} is not of type P, OC or OCOC",
                    pattern(&runs)
                )
            });
            (
                BlockType::Inadmissible,
                Some(format!("interval [{},{}]: {why}", here(iv.lo), here(iv.hi))),
            )
        }
    }
}

/// Detects the case where arcs from the first opener run to the last closer
/// run envelope three or more indecomposable intervals.
fn envelope_reason(runs: &[(VertexRole, Vec<Vertex>)], arcs: &[&Arc], n: usize) -> Option<String> {
    let first = &runs.first()?.1;
    let last = &runs.last()?.1;
    let (outer, inner): (Vec<&Arc>, Vec<&Arc>) = arcs
        .iter()
        .partition(|a| first.contains(&a.open) && last.contains(&a.close));
    if outer.is_empty() {
        return None;
    }
    let inner: Vec<Arc> = inner.into_iter().copied().collect();
    let blocks = cut_intervals(n, &inner)
        .into_iter()
        .filter(|iv| inner.iter().any(|a| iv.contains(a.open)))
        .count();
    (blocks >= 3).then(|| {
        let noun = if outer.len() == 1 { "arc" } else { "arcs" };
        format!("enveloping {noun} spans {blocks} indecomposable intervals")
    })
}

/// Classifies one indecomposable interval of an inflated diagram.
pub fn classify_interval(inflated: &ArcDiagram, map: &InflationMap, iv: Interval) -> BlockType {
    classify_detailed(inflated, map, iv).0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer: Option<Layer>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colour: Option<Colour>,
    /// Bounds in original vertex labels.
    pub lo: Vertex,
    pub hi: Vertex,
    #[serde(flatten)]
    pub block: BlockType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub intervals: Vec<IntervalReport>,
    pub reason: Option<String>,
}

impl AdmissibilityReport {
    fn merge(parts: Vec<AdmissibilityReport>) -> AdmissibilityReport {
        let mut out = AdmissibilityReport {
            admissible: true,
            intervals: Vec::new(),
            reason: None,
        };
        for p in parts {
            out.admissible &= p.admissible;
            out.intervals.extend(p.intervals);
            if out.reason.is_none() {
                out.reason = p.reason;
            }
        }
        out
    }

    fn tag(mut self, layer: Option<Layer>, colour: Option<Colour>) -> Self {
        for iv in &mut self.intervals {
            iv.layer = layer.or(iv.layer);
            iv.colour = colour.or(iv.colour);
        }
        if let Some(r) = self.reason.take() {
            let mut prefix = String::new();
            if let Some(c) = colour {
                prefix.push_str(&format!("colour {c}, "));
            }
            if let Some(l) = layer {
                prefix.push_str(&format!("{l} layer, "));
            }
            self.reason = Some(format!("{prefix}{r}"));
        }
        self
    }
}

/// Inflation plus per-interval classification of a single-layer diagram.
#[derive(Clone, Debug)]
pub struct LayerAnalysis {
    pub inflated: ArcDiagram,
    pub map: InflationMap,
    pub blocks: Vec<(Interval, BlockType)>,
    pub reason: Option<String>,
}

impl LayerAnalysis {
    pub fn admissible(&self) -> bool {
        self.blocks.iter().all(|(_, b)| b.is_admissible())
    }

    pub fn report(&self) -> AdmissibilityReport {
        AdmissibilityReport {
            admissible: self.admissible(),
            intervals: self
                .blocks
                .iter()
                .map(|(iv, b)| IntervalReport {
                    layer: None,
                    colour: None,
                    lo: self.map.original(iv.lo),
                    hi: self.map.original(iv.hi),
                    block: *b,
                })
                .collect(),
            reason: self.reason.clone(),
        }
    }
}

pub fn analyze_layer(d: &ArcDiagram, enhanced: bool) -> Result<LayerAnalysis, StructureError> {
    let (inflated, map) = inflate(d, enhanced)?;
    let mut blocks = Vec::new();
    let mut reason = None;
    for iv in decompose(&inflated, Layer::Upper) {
        let (b, why) = classify_detailed(&inflated, &map, iv);
        if reason.is_none() {
            reason = why;
        }
        blocks.push((iv, b));
    }
    Ok(LayerAnalysis {
        inflated,
        map,
        blocks,
        reason,
    })
}

/// Separates a permutation diagram into its upper and lower halves, each as
/// a single-layer diagram with the arcs drawn on top. Loops stay with the
/// upper half; every vertex without arcs in a half is an isolated
/// placeholder there.
pub fn split_permutation(d: &ArcDiagram) -> Result<(ArcDiagram, ArcDiagram), StructureError> {
    let upper = ArcDiagram::new(d.n(), d.upper().to_vec(), Vec::new(), d.loops().clone())?;
    let lower = ArcDiagram::new(d.n(), d.lower().to_vec(), Vec::new(), Default::default())?;
    Ok((upper, lower))
}

/// Identifies the vertices of an upper and a lower half and checks that the
/// result is a permutation.
pub fn stitch_permutation(
    upper: &ArcDiagram,
    lower: &ArcDiagram,
) -> Result<ArcDiagram, StructureError> {
    if upper.n() != lower.n() {
        return Err(StructureError::Stitch(format!(
            "halves have {} and {} vertices",
            upper.n(),
            lower.n()
        )));
    }
    if !lower.loops().is_empty() || !upper.lower().is_empty() || !lower.lower().is_empty() {
        return Err(StructureError::Stitch("halves must be single-layer".into()));
    }
    let d = ArcDiagram::new(
        upper.n(),
        upper.upper().to_vec(),
        lower.upper().to_vec(),
        upper.loops().clone(),
    )?;
    d.permutation()
        .map_err(|e| StructureError::Stitch(e.to_string()))?;
    Ok(d)
}

/// Admissibility of a whole diagram. Permutations are admissible when both
/// halves are: the upper half under enhanced semantics, the lower half under
/// plain semantics.
pub fn is_admissible(
    class: ObjectClass,
    d: &ArcDiagram,
) -> Result<AdmissibilityReport, StructureError> {
    match class.kind {
        ClassKind::Permutation => {
            let (up, lo) = split_permutation(d)?;
            Ok(AdmissibilityReport::merge(vec![
                analyze_layer(&up, true)?
                    .report()
                    .tag(Some(Layer::Upper), None),
                analyze_layer(&lo, false)?
                    .report()
                    .tag(Some(Layer::Lower), None),
            ]))
        }
        _ => Ok(analyze_layer(d, class.enhanced)?.report()),
    }
}

/// Admissibility of every colour class taken on its own.
pub fn is_admissible_per_colour(
    class: ObjectClass,
    d: &ArcDiagram,
) -> Result<AdmissibilityReport, StructureError> {
    let mut parts = Vec::new();
    for c in d.colours() {
        parts.push(is_admissible(class, &d.restrict_colour(c))?.tag(None, Some(c)));
    }
    Ok(AdmissibilityReport::merge(parts))
}
