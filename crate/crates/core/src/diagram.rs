//! Arc annotated diagrams.
//!
//! One carrier type, [`ArcDiagram`], represents partial matchings, set
//! partitions and permutations. Vertices are labelled `1..=n`. Upper arcs sit
//! above the line, lower arcs (permutations only) below it, and loops mark
//! vertices that behave as an opener immediately followed by a closer under
//! enhanced statistics.
//!
//! Text form, one object per line:
//!
//! ```text
//! M n=10; 1-9,2-5,3-6,4-7,8-10
//! P n=9; {1,3,5}{2}{4,6}{7,8,9}
//! S n=12; 9 5 6 7 8 3 2 1 4 12 11 10
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type Vertex = usize;
pub type Colour = u32;

pub const DEFAULT_COLOUR: Colour = 1;

/// An arc joining `open < close`, carrying a colour (1 when uncoloured).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arc {
    pub open: Vertex,
    pub close: Vertex,
    pub colour: Colour,
}

impl Arc {
    pub fn new(open: Vertex, close: Vertex) -> Self {
        Self::coloured(open, close, DEFAULT_COLOUR)
    }

    pub fn coloured(open: Vertex, close: Vertex, colour: Colour) -> Self {
        Arc {
            open,
            close,
            colour,
        }
    }

    pub fn span(&self) -> usize {
        self.close - self.open
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Upper,
    Lower,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layer::Upper => f.write_str("upper"),
            Layer::Lower => f.write_str("lower"),
        }
    }
}

/// Role of a vertex within one layer, a pure function of arc incidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexRole {
    FixedPoint,
    Opener,
    Closer,
    Transitory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    Matching,
    SetPartition,
    Permutation,
}

impl ClassKind {
    pub fn tag(self) -> char {
        match self {
            ClassKind::Matching => 'M',
            ClassKind::SetPartition => 'P',
            ClassKind::Permutation => 'S',
        }
    }

    /// Checks the class-specific shape constraints on top of the generic
    /// diagram invariants.
    pub fn check(self, d: &ArcDiagram) -> Result<(), DiagramError> {
        match self {
            ClassKind::Matching => {
                if !d.lower.is_empty() {
                    return Err(DiagramError::LowerArcs(self));
                }
                let roles = d.roles(Layer::Upper);
                if let Some(v) = roles.iter().position(|r| *r == VertexRole::Transitory) {
                    return Err(DiagramError::TransitoryInMatching(v + 1));
                }
                Ok(())
            }
            ClassKind::SetPartition => {
                if !d.lower.is_empty() {
                    return Err(DiagramError::LowerArcs(self));
                }
                Ok(())
            }
            ClassKind::Permutation => d.permutation().map(|_| ()),
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClassKind::Matching => "matching",
            ClassKind::SetPartition => "set-partition",
            ClassKind::Permutation => "permutation",
        };
        f.write_str(name)
    }
}

/// Object class plus the statistics semantics flag.
///
/// Permutations always use enhanced counting on the upper layer and plain
/// counting on the lower layer; `enhanced` only selects the semantics for
/// matchings and set partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ObjectClass {
    pub kind: ClassKind,
    pub enhanced: bool,
}

impl ObjectClass {
    pub fn new(kind: ClassKind, enhanced: bool) -> Self {
        ObjectClass { kind, enhanced }
    }

    /// Whether the upper layer of a diagram of this class uses enhanced counting.
    pub fn upper_enhanced(&self) -> bool {
        self.kind == ClassKind::Permutation || self.enhanced
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("arc {open}-{close} must have open < close")]
    ReversedArc { open: Vertex, close: Vertex },
    #[error("colour must be a positive integer")]
    ZeroColour,
    #[error("vertex {vertex} is used twice as {what} in the {layer} layer")]
    SharedEndpoint {
        vertex: Vertex,
        layer: Layer,
        what: &'static str,
    },
    #[error("loop at vertex {0} conflicts with an upper arc")]
    LoopConflict(Vertex),
    #[error("{0} diagrams cannot have lower arcs")]
    LowerArcs(ClassKind),
    #[error("vertex {0} is a transitory, which a matching cannot have")]
    TransitoryInMatching(Vertex),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
}

/// Arc annotated diagram on vertices `1..=n`.
///
/// Arcs are kept sorted by opener, so two diagrams are equal exactly when
/// they describe the same object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcDiagram {
    n: usize,
    upper: Vec<Arc>,
    lower: Vec<Arc>,
    loops: BTreeMap<Vertex, Colour>,
}

impl ArcDiagram {
    pub fn new(
        n: usize,
        mut upper: Vec<Arc>,
        mut lower: Vec<Arc>,
        loops: BTreeMap<Vertex, Colour>,
    ) -> Result<Self, DiagramError> {
        upper.sort();
        lower.sort();
        for (layer, arcs) in [(Layer::Upper, &upper), (Layer::Lower, &lower)] {
            let mut opened = vec![false; n + 1];
            let mut closed = vec![false; n + 1];
            for a in arcs.iter() {
                for v in [a.open, a.close] {
                    if v == 0 || v > n {
                        return Err(DiagramError::VertexOutOfRange { vertex: v, n });
                    }
                }
                if a.open >= a.close {
                    return Err(DiagramError::ReversedArc {
                        open: a.open,
                        close: a.close,
                    });
                }
                if a.colour == 0 {
                    return Err(DiagramError::ZeroColour);
                }
                if std::mem::replace(&mut opened[a.open], true) {
                    return Err(DiagramError::SharedEndpoint {
                        vertex: a.open,
                        layer,
                        what: "an opener",
                    });
                }
                if std::mem::replace(&mut closed[a.close], true) {
                    return Err(DiagramError::SharedEndpoint {
                        vertex: a.close,
                        layer,
                        what: "a closer",
                    });
                }
            }
            if layer == Layer::Upper {
                for (&v, &c) in &loops {
                    if v == 0 || v > n {
                        return Err(DiagramError::VertexOutOfRange { vertex: v, n });
                    }
                    if c == 0 {
                        return Err(DiagramError::ZeroColour);
                    }
                    if opened[v] || closed[v] {
                        return Err(DiagramError::LoopConflict(v));
                    }
                }
            }
        }
        Ok(ArcDiagram {
            n,
            upper,
            lower,
            loops,
        })
    }

    /// A diagram with `n` vertices and no arcs or loops.
    pub fn empty(n: usize) -> Self {
        ArcDiagram {
            n,
            upper: Vec::new(),
            lower: Vec::new(),
            loops: BTreeMap::new(),
        }
    }

    /// Single-layer diagram from upper arcs; every other vertex becomes a
    /// colour-1 loop, which is how matchings and set partitions carry their
    /// fixed points.
    pub fn single_layer(n: usize, upper: Vec<Arc>) -> Result<Self, DiagramError> {
        let mut touched = vec![false; n + 1];
        for a in &upper {
            for v in [a.open, a.close] {
                if v <= n {
                    touched[v] = true;
                }
            }
        }
        let loops = (1..=n)
            .filter(|&v| !touched[v])
            .map(|v| (v, DEFAULT_COLOUR))
            .collect();
        Self::new(n, upper, Vec::new(), loops)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[Arc] {
        &self.upper
    }

    pub fn lower(&self) -> &[Arc] {
        &self.lower
    }

    pub fn arcs(&self, layer: Layer) -> &[Arc] {
        match layer {
            Layer::Upper => &self.upper,
            Layer::Lower => &self.lower,
        }
    }

    pub fn loops(&self) -> &BTreeMap<Vertex, Colour> {
        &self.loops
    }

    /// Total number of arcs in both layers, loops excluded.
    pub fn arc_count(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    pub fn roles(&self, layer: Layer) -> Vec<VertexRole> {
        roles_of(self.n, self.arcs(layer))
    }

    /// Sorted list of colours used by arcs and loops.
    pub fn colours(&self) -> Vec<Colour> {
        let mut cs: Vec<Colour> = self
            .upper
            .iter()
            .chain(&self.lower)
            .map(|a| a.colour)
            .chain(self.loops.values().copied())
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// The sub-diagram of one colour class. Vertices that lose all their
    /// arcs become plain isolated vertices (not loops).
    pub fn restrict_colour(&self, colour: Colour) -> ArcDiagram {
        let keep = |arcs: &[Arc]| -> Vec<Arc> {
            arcs.iter()
                .copied()
                .filter(|a| a.colour == colour)
                .collect()
        };
        ArcDiagram {
            n: self.n,
            upper: keep(&self.upper),
            lower: keep(&self.lower),
            loops: self
                .loops
                .iter()
                .filter(|(_, &c)| c == colour)
                .map(|(&v, &c)| (v, c))
                .collect(),
        }
    }

    /// Same vertex set, every arc and loop recoloured to 1.
    pub fn uncoloured(&self) -> ArcDiagram {
        let strip =
            |arcs: &[Arc]| -> Vec<Arc> { arcs.iter().map(|a| Arc::new(a.open, a.close)).collect() };
        ArcDiagram {
            n: self.n,
            upper: strip(&self.upper),
            lower: strip(&self.lower),
            loops: self.loops.keys().map(|&v| (v, DEFAULT_COLOUR)).collect(),
        }
    }

    /// Builds the arc diagram of a permutation in one-line notation
    /// (`sigma[a-1] = σ(a)`). `colours`, when given, colours the arc leaving
    /// each vertex.
    pub fn from_permutation(
        sigma: &[Vertex],
        colours: Option<&[Colour]>,
    ) -> Result<Self, DiagramError> {
        let n = sigma.len();
        let mut seen = vec![false; n + 1];
        for &t in sigma {
            if t == 0 || t > n {
                return Err(DiagramError::VertexOutOfRange { vertex: t, n });
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(DiagramError::NotAPermutation(format!(
                    "value {t} appears twice"
                )));
            }
        }
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut loops = BTreeMap::new();
        for (i, &t) in sigma.iter().enumerate() {
            let a = i + 1;
            let c = colours.map_or(DEFAULT_COLOUR, |cs| cs[i]);
            match a.cmp(&t) {
                std::cmp::Ordering::Less => upper.push(Arc::coloured(a, t, c)),
                std::cmp::Ordering::Equal => {
                    loops.insert(a, c);
                }
                std::cmp::Ordering::Greater => lower.push(Arc::coloured(t, a, c)),
            }
        }
        Self::new(n, upper, lower, loops)
    }

    /// Reads σ back from the arcs: an upper arc or loop leaves its left
    /// endpoint, a lower arc leaves its right endpoint. Returns σ in one-line
    /// notation with the colour of each vertex's outgoing arc.
    pub fn permutation(&self) -> Result<Vec<(Vertex, Colour)>, DiagramError> {
        let n = self.n;
        let mut out: Vec<Option<(Vertex, Colour)>> = vec![None; n + 1];
        let mut hit = vec![false; n + 1];
        let mut set = |from: Vertex, to: Vertex, c: Colour| -> Result<(), DiagramError> {
            if out[from].replace((to, c)).is_some() {
                return Err(DiagramError::NotAPermutation(format!(
                    "vertex {from} has two outgoing arcs"
                )));
            }
            if std::mem::replace(&mut hit[to], true) {
                return Err(DiagramError::NotAPermutation(format!(
                    "vertex {to} has two incoming arcs"
                )));
            }
            Ok(())
        };
        for (&v, &c) in &self.loops {
            set(v, v, c)?;
        }
        for a in &self.upper {
            set(a.open, a.close, a.colour)?;
        }
        for a in &self.lower {
            set(a.close, a.open, a.colour)?;
        }
        (1..=n)
            .map(|v| {
                out[v].ok_or_else(|| {
                    DiagramError::NotAPermutation(format!("vertex {v} has no outgoing arc"))
                })
            })
            .collect()
    }

    /// Blocks of a single-layer diagram, each listed left to right with the
    /// colour of the arc entering every element after the first. Singletons
    /// carry their loop colour, if any, in the first slot.
    pub fn blocks(&self) -> Vec<Vec<(Vertex, Option<Colour>)>> {
        let mut next: Vec<Option<(Vertex, Colour)>> = vec![None; self.n + 1];
        let mut has_prev = vec![false; self.n + 1];
        for a in &self.upper {
            next[a.open] = Some((a.close, a.colour));
            has_prev[a.close] = true;
        }
        let mut blocks = Vec::new();
        for v in 1..=self.n {
            if has_prev[v] {
                continue;
            }
            let mut block = vec![(v, self.loops.get(&v).copied())];
            let mut cur = v;
            while let Some((w, c)) = next[cur] {
                block.push((w, Some(c)));
                cur = w;
            }
            blocks.push(block);
        }
        blocks
    }

    /// Same vertices and loops with the upper arc list replaced.
    pub fn with_upper(&self, upper: Vec<Arc>) -> Result<Self, DiagramError> {
        Self::new(self.n, upper, self.lower.clone(), self.loops.clone())
    }
}

pub(crate) fn roles_of(n: usize, arcs: &[Arc]) -> Vec<VertexRole> {
    let mut opens = vec![false; n + 1];
    let mut closes = vec![false; n + 1];
    for a in arcs {
        opens[a.open] = true;
        closes[a.close] = true;
    }
    (1..=n)
        .map(|v| match (opens[v], closes[v]) {
            (false, false) => VertexRole::FixedPoint,
            (true, false) => VertexRole::Opener,
            (false, true) => VertexRole::Closer,
            (true, true) => VertexRole::Transitory,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn syntax<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax(msg.into()))
}

fn parse_num(tok: &str, what: &str) -> Result<usize, ParseError> {
    let tok = tok.trim();
    match tok.parse::<usize>() {
        Ok(v) => Ok(v),
        Err(_) => syntax(format!("expected {what}, found {tok:?}")),
    }
}

fn parse_colour(tok: &str) -> Result<Colour, ParseError> {
    let c = parse_num(tok, "colour")?;
    if c == 0 {
        return Err(DiagramError::ZeroColour.into());
    }
    Colour::try_from(c).or_else(|_| syntax(format!("colour {c} is too large")))
}

/// Splits `"x:c"` into `x` and an optional colour.
fn split_colour(tok: &str) -> Result<(&str, Option<Colour>), ParseError> {
    match tok.split_once(':') {
        Some((body, c)) => Ok((body, Some(parse_colour(c)?))),
        None => Ok((tok, None)),
    }
}

/// Parses one line of the diagram grammar.
///
/// Matchings and set partitions come back with `enhanced = false`;
/// permutations with `enhanced = true`.
pub fn parse(text: &str) -> Result<(ObjectClass, ArcDiagram), ParseError> {
    let text = text.trim();
    let mut chars = text.chars();
    let kind = match chars.next() {
        Some('M') => ClassKind::Matching,
        Some('P') => ClassKind::SetPartition,
        Some('S') => ClassKind::Permutation,
        _ => return syntax("a diagram starts with M, P or S"),
    };
    let rest = chars.as_str().trim_start();
    let Some(rest) = rest.strip_prefix("n=") else {
        return syntax("expected n=<N> after the class letter");
    };
    let Some((n_txt, body)) = rest.split_once(';') else {
        return syntax("expected ';' after n=<N>");
    };
    let n = parse_num(n_txt, "vertex count")?;
    let body = body.trim();
    let d = match kind {
        ClassKind::Matching => parse_matching(n, body)?,
        ClassKind::SetPartition => parse_partition(n, body)?,
        ClassKind::Permutation => parse_permutation(n, body)?,
    };
    kind.check(&d)?;
    Ok((ObjectClass::new(kind, kind == ClassKind::Permutation), d))
}

fn parse_matching(n: usize, body: &str) -> Result<ArcDiagram, ParseError> {
    let mut arcs = Vec::new();
    let mut loops = BTreeMap::new();
    if !body.is_empty() {
        for tok in body.split(',') {
            let (pair, colour) = split_colour(tok.trim())?;
            let Some((i, j)) = pair.split_once('-') else {
                return syntax(format!("expected <i>-<j>, found {pair:?}"));
            };
            let (i, j) = (parse_num(i, "vertex")?, parse_num(j, "vertex")?);
            let colour = colour.unwrap_or(DEFAULT_COLOUR);
            if i == j {
                if i == 0 || i > n {
                    return Err(DiagramError::VertexOutOfRange { vertex: i, n }.into());
                }
                if loops.insert(i, colour).is_some() {
                    return syntax(format!("vertex {i} listed twice"));
                }
            } else {
                arcs.push(Arc::coloured(i, j, colour));
            }
        }
    }
    let base = ArcDiagram::single_layer(n, arcs.clone())?;
    let mut all_loops = base.loops.clone();
    for (v, c) in loops {
        if !all_loops.contains_key(&v) {
            return Err(DiagramError::LoopConflict(v).into());
        }
        all_loops.insert(v, c);
    }
    Ok(ArcDiagram::new(n, arcs, Vec::new(), all_loops)?)
}

fn parse_partition(n: usize, body: &str) -> Result<ArcDiagram, ParseError> {
    let mut arcs = Vec::new();
    let mut loops = BTreeMap::new();
    let mut used = vec![false; n + 1];
    let mut rest = body;
    while !rest.is_empty() {
        let Some(after_brace) = rest.strip_prefix('{') else {
            return syntax(format!("expected '{{' at {rest:?}"));
        };
        let Some((inner, tail)) = after_brace.split_once('}') else {
            return syntax("unterminated block");
        };
        let mut tail = tail.trim_start();
        let mut block_colour = None;
        if let Some(t) = tail.strip_prefix(':') {
            let end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
            block_colour = Some(parse_colour(&t[..end])?);
            tail = t[end..].trim_start();
        }
        let mut elems = Vec::new();
        for tok in inner.split(',') {
            let (v, c) = split_colour(tok.trim())?;
            let v = parse_num(v, "vertex")?;
            if v == 0 || v > n {
                return Err(DiagramError::VertexOutOfRange { vertex: v, n }.into());
            }
            if std::mem::replace(&mut used[v], true) {
                return syntax(format!("vertex {v} appears in two blocks"));
            }
            elems.push((v, c));
        }
        elems.sort_by_key(|e| e.0);
        if elems[0].1.is_some() {
            return syntax(format!(
                "vertex {} opens its block and cannot carry an arc colour",
                elems[0].0
            ));
        }
        let default = block_colour.unwrap_or(DEFAULT_COLOUR);
        if elems.len() == 1 {
            loops.insert(elems[0].0, default);
        }
        for w in elems.windows(2) {
            arcs.push(Arc::coloured(w[0].0, w[1].0, w[1].1.unwrap_or(default)));
        }
        rest = tail;
    }
    for (v, &u) in used.iter().enumerate().skip(1) {
        if !u {
            loops.insert(v, DEFAULT_COLOUR);
        }
    }
    Ok(ArcDiagram::new(n, arcs, Vec::new(), loops)?)
}

fn parse_permutation(n: usize, body: &str) -> Result<ArcDiagram, ParseError> {
    let mut sigma = Vec::with_capacity(n);
    let mut colours = Vec::with_capacity(n);
    for tok in body.split_whitespace() {
        let (v, c) = split_colour(tok)?;
        sigma.push(parse_num(v, "permutation entry")?);
        colours.push(c.unwrap_or(DEFAULT_COLOUR));
    }
    if sigma.len() != n {
        return syntax(format!("permutation has {} entries but n={n}", sigma.len()));
    }
    Ok(ArcDiagram::from_permutation(&sigma, Some(&colours))?)
}

fn colour_suffix(c: Colour) -> String {
    if c == DEFAULT_COLOUR {
        String::new()
    } else {
        format!(":{c}")
    }
}

/// Canonical text form. Arcs are listed by opener; colour 1 is never written.
pub fn serialize(kind: ClassKind, d: &ArcDiagram) -> String {
    let head = format!("{} n={};", kind.tag(), d.n);
    let body = match kind {
        ClassKind::Matching => {
            let mut items: Vec<(Vertex, String)> = d
                .upper
                .iter()
                .map(|a| {
                    (
                        a.open,
                        format!("{}-{}{}", a.open, a.close, colour_suffix(a.colour)),
                    )
                })
                .collect();
            items.extend(
                d.loops
                    .iter()
                    .filter(|(_, &c)| c != DEFAULT_COLOUR)
                    .map(|(&v, &c)| (v, format!("{v}-{v}:{c}"))),
            );
            items.sort();
            items
                .into_iter()
                .map(|(_, s)| s)
                .collect::<Vec<_>>()
                .join(",")
        }
        ClassKind::SetPartition => {
            let mut out = String::new();
            for block in d.blocks() {
                out.push('{');
                if block.len() == 1 {
                    out.push_str(&block[0].0.to_string());
                    out.push('}');
                    out.push_str(&colour_suffix(block[0].1.unwrap_or(DEFAULT_COLOUR)));
                    continue;
                }
                let first_colour = block[1].1;
                let uniform = block[1..].iter().all(|e| e.1 == first_colour);
                let elems: Vec<String> = block
                    .iter()
                    .enumerate()
                    .map(|(i, &(v, c))| match (i, uniform) {
                        (0, _) | (_, true) => v.to_string(),
                        _ => format!("{v}{}", colour_suffix(c.unwrap_or(DEFAULT_COLOUR))),
                    })
                    .collect();
                out.push_str(&elems.join(","));
                out.push('}');
                if uniform {
                    out.push_str(&colour_suffix(first_colour.unwrap_or(DEFAULT_COLOUR)));
                }
            }
            out
        }
        ClassKind::Permutation => match d.permutation() {
            Ok(sigma) => sigma
                .iter()
                .map(|&(t, c)| format!("{t}{}", colour_suffix(c)))
                .collect::<Vec<_>>()
                .join(" "),
            Err(_) => String::from("?"),
        },
    };
    if body.is_empty() {
        head
    } else {
        format!("{head} {body}")
    }
}

/// Smallest class able to express the diagram: permutations keep their
/// class, single-layer diagrams are matchings unless they have a transitory.
pub fn natural_kind(hint: ClassKind, d: &ArcDiagram) -> ClassKind {
    match hint {
        ClassKind::Permutation => ClassKind::Permutation,
        _ if ClassKind::Matching.check(d).is_ok() => hint,
        _ => ClassKind::SetPartition,
    }
}
