//! Independent oracles shared by the integration tests. Nothing here calls
//! into the structure, bijection or enumeration modules.

#![allow(dead_code)]

use arcnest::diagram::{Arc, ArcDiagram, ClassKind, Layer, ObjectClass, VertexRole};
use arcnest::stats::Label;
use regex::Regex;

/// Counts k-crossings and k-nestings by testing every k-subset of arcs
/// against the defining inequalities. Plain semantics drop loops and use
/// strict inequalities; enhanced semantics keep loops as `(v, v)` and allow
/// `i_k = j_1` (crossing) or `i_k = j_k` (nesting). Chains are
/// monochromatic.
pub fn naive_label(arcs: &[Arc], enhanced: bool) -> Label {
    let arcs: Vec<Arc> = arcs
        .iter()
        .copied()
        .filter(|a| enhanced || a.open != a.close)
        .collect();
    let m = arcs.len();
    let mut nest = vec![0u128; m.saturating_sub(1)];
    let mut cross = vec![0u128; m.saturating_sub(1)];
    for mask in 0u32..(1 << m) {
        let k = mask.count_ones() as usize;
        if k < 2 {
            continue;
        }
        let mut pick: Vec<Arc> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| arcs[i])
            .collect();
        if pick.iter().any(|a| a.colour != pick[0].colour) {
            continue;
        }
        pick.sort_by_key(|a| a.open);
        let opens_rise = pick.windows(2).all(|w| w[0].open < w[1].open);
        let closes_rise = pick.windows(2).all(|w| w[0].close < w[1].close);
        let closes_fall = pick.windows(2).all(|w| w[0].close > w[1].close);
        let (ik, j1, jk) = (pick[k - 1].open, pick[0].close, pick[k - 1].close);
        let crossing = opens_rise && closes_rise && if enhanced { ik <= j1 } else { ik < j1 };
        let nesting = opens_rise && closes_fall && if enhanced { ik <= jk } else { ik < jk };
        if crossing {
            cross[k - 2] += 1;
        }
        if nesting {
            nest[k - 2] += 1;
        }
    }
    Label::new(nest, cross)
}

/// Upper arcs plus loops as degenerate arcs.
pub fn upper_arcs(d: &ArcDiagram) -> Vec<Arc> {
    let mut arcs = d.upper().to_vec();
    arcs.extend(d.loops().iter().map(|(&v, &c)| Arc::coloured(v, v, c)));
    arcs
}

/// Per-layer labels: one entry for single-layer classes, upper then lower
/// for permutations.
pub fn naive_labels(class: ObjectClass, d: &ArcDiagram) -> Vec<Label> {
    match class.kind {
        ClassKind::Permutation => vec![
            naive_label(&upper_arcs(d), true),
            naive_label(d.lower(), false),
        ],
        _ => vec![naive_label(&upper_arcs(d), class.enhanced)],
    }
}

/// Role word of one layer. Plain semantics: openers `O`, closers `C`, a
/// transitory `CO`, fixed points nothing. Enhanced semantics: a loop or a
/// transitory becomes the pair `oc`; isolated non-loop vertices give
/// nothing.
fn role_word(d: &ArcDiagram, layer: Layer, enhanced: bool) -> String {
    let roles = d.roles(layer);
    let mut w = String::new();
    for (i, r) in roles.iter().enumerate() {
        let v = i + 1;
        w.push_str(match r {
            VertexRole::Opener => "O",
            VertexRole::Closer => "C",
            VertexRole::Transitory if enhanced => "oc",
            VertexRole::Transitory => "CO",
            VertexRole::FixedPoint
                if enhanced && layer == Layer::Upper && d.loops().contains_key(&v) =>
            {
                "oc"
            }
            VertexRole::FixedPoint => "",
        });
    }
    w
}

/// Cuts a role word wherever openers and closers so far balance.
fn balanced_blocks(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in word.chars() {
        depth += if ch == 'O' || ch == 'o' { 1 } else { -1 };
        cur.push(ch);
        if depth == 0 {
            out.push(std::mem::take(&mut cur));
        }
    }
    assert!(cur.is_empty(), "unbalanced role word {word}");
    out
}

/// Admissibility decided on role words alone: each balanced block must be a
/// lone loop, an OC shape, or two OC shapes back to back. An `oc` pair is
/// only allowed as the last opener and first closer of an OC shape.
pub struct RoleOracle {
    pattern: Regex,
}

impl RoleOracle {
    pub fn new() -> Self {
        let oc = "(?:O+C+|O*ocC*)";
        RoleOracle {
            pattern: Regex::new(&format!("^(?:oc|{oc}|{oc}{oc})$")).unwrap(),
        }
    }

    fn layer_ok(&self, d: &ArcDiagram, layer: Layer, enhanced: bool) -> bool {
        balanced_blocks(&role_word(d, layer, enhanced))
            .iter()
            .all(|b| self.pattern.is_match(b))
    }

    pub fn admissible(&self, class: ObjectClass, d: &ArcDiagram) -> bool {
        match class.kind {
            ClassKind::Permutation => {
                self.layer_ok(d, Layer::Upper, true) && self.layer_ok(d, Layer::Lower, false)
            }
            _ => self.layer_ok(d, Layer::Upper, class.enhanced),
        }
    }
}

/// All involutions of `[n]` as arc diagrams (fixed points become loops).
pub fn involutions(n: usize) -> Vec<ArcDiagram> {
    fn go(n: usize, partner: &mut Vec<Option<usize>>, out: &mut Vec<ArcDiagram>) {
        let Some(i) = (1..=n).find(|&v| partner[v].is_none()) else {
            let arcs = (1..=n)
                .filter_map(|v| partner[v].filter(|&w| w > v).map(|w| Arc::new(v, w)))
                .collect();
            out.push(ArcDiagram::single_layer(n, arcs).unwrap());
            return;
        };
        partner[i] = Some(i);
        go(n, partner, out);
        for j in i + 1..=n {
            if partner[j].is_none() {
                partner[i] = Some(j);
                partner[j] = Some(i);
                go(n, partner, out);
                partner[j] = None;
            }
        }
        partner[i] = None;
    }
    let mut out = Vec::new();
    go(n, &mut vec![None; n + 1], &mut out);
    out
}

/// All set partitions of `[n]`, each block drawn as a chain of arcs.
pub fn set_partitions(n: usize) -> Vec<ArcDiagram> {
    fn go(n: usize, rgs: &mut Vec<usize>, out: &mut Vec<ArcDiagram>) {
        if rgs.len() == n {
            let mut arcs = Vec::new();
            for i in 0..n {
                if let Some(j) = (i + 1..n).find(|&j| rgs[j] == rgs[i]) {
                    arcs.push(Arc::new(i + 1, j + 1));
                }
            }
            out.push(ArcDiagram::single_layer(n, arcs).unwrap());
            return;
        }
        let top = rgs.iter().max().map_or(0, |m| m + 1);
        for b in 0..=top {
            rgs.push(b);
            go(n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// All permutations of `[n]` in lexicographic order.
pub fn permutations(n: usize) -> Vec<ArcDiagram> {
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<ArcDiagram>) {
        if cur.len() == n {
            out.push(ArcDiagram::from_permutation(cur, None).unwrap());
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

pub fn all_objects(kind: ClassKind, n: usize) -> Vec<ArcDiagram> {
    match kind {
        ClassKind::Matching => involutions(n),
        ClassKind::SetPartition => set_partitions(n),
        ClassKind::Permutation => permutations(n),
    }
}

pub fn arc_pairs(arcs: &[Arc]) -> Vec<(usize, usize)> {
    arcs.iter().map(|a| (a.open, a.close)).collect()
}
