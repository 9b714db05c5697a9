//! The divide description language and its combinatorics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl Side {
    fn as_str(self) -> &'static str {
        match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        }
    }
}

/// One elementary tangle. Ranks are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Cross { i: usize },
    Cap { i: usize, j: usize },
    Cup { i: usize, j: usize },
    YCap { i: usize, mid: usize, j: usize, sign: Sign },
    YCup { i: usize, mid: usize, j: usize, sign: Sign },
    End { i: usize, side: Side, sign: Sign },
    Boundary { i: usize, side: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Connector {
    pub h: i64,
    pub kind: Kind,
}

impl Kind {
    /// Chain ends consumed by this connector.
    pub fn consumes(&self) -> Vec<(usize, Side)> {
        match *self {
            Kind::Cross { .. } => vec![],
            Kind::Cap { i, j } => vec![(i, Side::Top), (j, Side::Top)],
            Kind::Cup { i, j } => vec![(i, Side::Bottom), (j, Side::Bottom)],
            Kind::YCap { i, mid, j, .. } => vec![(i, Side::Top), (mid, Side::Top), (j, Side::Top)],
            Kind::YCup { i, mid, j, .. } => {
                vec![(i, Side::Bottom), (mid, Side::Bottom), (j, Side::Bottom)]
            }
            Kind::End { i, side, .. } | Kind::Boundary { i, side } => vec![(i, side)],
        }
    }

    pub fn sign(&self) -> Option<Sign> {
        match *self {
            Kind::YCap { sign, .. } | Kind::YCup { sign, .. } | Kind::End { sign, .. } => Some(sign),
            _ => None,
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, Kind::YCap { .. } | Kind::YCup { .. } | Kind::End { .. } | Kind::Boundary { .. })
    }

    pub fn with_sign(self, s: Sign) -> Kind {
        match self {
            Kind::YCap { i, mid, j, .. } => Kind::YCap { i, mid, j, sign: s },
            Kind::YCup { i, mid, j, .. } => Kind::YCup { i, mid, j, sign: s },
            Kind::End { i, side, .. } => Kind::End { i, side, sign: s },
            k => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDivide {
    pub name: String,
    pub n_chains: usize,
    pub connectors: Vec<Connector>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("line {line}, column 1: unknown keyword `{word}`")]
    UnknownKeyword { line: usize, word: String },
    #[error("line {line}: duplicate connector height {h}")]
    DuplicateHeight { line: usize, h: i64 },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownKeyword { line, .. }
            | ParseError::DuplicateHeight { line, .. } => *line,
        }
    }
}

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start = None;
        for (k, ch) in text.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(k),
                (true, Some(s)) => {
                    items.push((s + 1, &text[s..k]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            items.push((s + 1, &text[s..]));
        }
        Tokens { line, items, pos: 0 }
    }

    fn err(&self, column: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column, msg: msg.into() }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let end_col = self.items.last().map(|(c, t)| c + t.len()).unwrap_or(1);
        let t = self
            .items
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err(end_col, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn num<T: FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let (c, t) = self.next(what)?;
        t.parse().map_err(|_| self.err(c, format!("expected {what}, found `{t}`")))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let (c, t) = self.next("rank index")?;
        match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(self.err(c, format!("expected 1-based rank index, found `{t}`"))),
        }
    }

    fn sign(&mut self) -> Result<Sign, ParseError> {
        let (c, t) = self.next("sign")?;
        match t {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(self.err(c, format!("expected `+` or `-`, found `{t}`"))),
        }
    }

    fn side(&mut self) -> Result<Side, ParseError> {
        let (c, t) = self.next("side")?;
        match t {
            "top" => Ok(Side::Top),
            "bottom" => Ok(Side::Bottom),
            _ => Err(self.err(c, format!("expected `top` or `bottom`, found `{t}`"))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.items.get(self.pos) {
            Some(&(c, t)) => Err(self.err(c, format!("unexpected trailing token `{t}`"))),
            None => Ok(()),
        }
    }
}

/// Parses a divide file. No semantic validation beyond syntax.
pub fn parse_divide(source: &str) -> Result<GraphDivide, ParseError> {
    parse_records(source, false).map(|(d, _)| d)
}

/// Records only present in tree-divide input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeMarks {
    /// `(rank, height)` of each degree-2 vertex.
    pub deg2: Vec<(usize, i64)>,
    /// Heights of isolated vertices.
    pub isolated: Vec<i64>,
}

/// Parses tree-divide input: no vertex signs, plus `deg2` and `isolated` records.
/// Vertex signs in the result are placeholders.
pub fn parse_tree_records(source: &str) -> Result<(GraphDivide, TreeMarks), ParseError> {
    parse_records(source, true)
}

fn parse_records(source: &str, tree: bool) -> Result<(GraphDivide, TreeMarks), ParseError> {
    let mut marks = TreeMarks::default();
    let mut name = None;
    let mut chains = None;
    let mut connectors = Vec::new();
    let mut heights = HashMap::new();
    for (ln, raw) in source.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut tk = Tokens::new(line, text);
        let Ok((_, word)) = tk.next("keyword") else { continue };
        let kind = match word {
            "divide" => {
                let (_, n) = tk.next("name")?;
                name = Some(n.to_string());
                tk.finish()?;
                continue;
            }
            "chains" => {
                chains = Some(tk.num::<usize>("chain count")?);
                tk.finish()?;
                continue;
            }
            "cross" => Kind::Cross { i: tk.index()? },
            "cap" | "cup" => {
                let (i, j) = (tk.index()?, tk.index()?);
                if word == "cap" {
                    Kind::Cap { i, j }
                } else {
                    Kind::Cup { i, j }
                }
            }
            "ycap" | "ycup" => {
                let (i, mid, j) = (tk.index()?, tk.index()?, tk.index()?);
                let h = tk.num::<i64>("height")?;
                let sign = if tree { Sign::Minus } else { tk.sign()? };
                tk.finish()?;
                let kind = if word == "ycap" {
                    Kind::YCap { i, mid, j, sign }
                } else {
                    Kind::YCup { i, mid, j, sign }
                };
                push(&mut connectors, &mut heights, line, h, kind)?;
                continue;
            }
            "end" => {
                let (i, side) = (tk.index()?, tk.side()?);
                let h = tk.num::<i64>("height")?;
                let sign = if tree { Sign::Minus } else { tk.sign()? };
                tk.finish()?;
                push(&mut connectors, &mut heights, line, h, Kind::End { i, side, sign })?;
                continue;
            }
            "boundary" => {
                let (i, side) = (tk.index()?, tk.side()?);
                Kind::Boundary { i, side }
            }
            "deg2" if tree => {
                let i = tk.index()?;
                marks.deg2.push((i, tk.num::<i64>("height")?));
                tk.finish()?;
                continue;
            }
            "isolated" if tree => {
                marks.isolated.push(tk.num::<i64>("height")?);
                tk.finish()?;
                continue;
            }
            other => {
                return Err(ParseError::UnknownKeyword { line, word: other.to_string() });
            }
        };
        let h = tk.num::<i64>("height")?;
        tk.finish()?;
        push(&mut connectors, &mut heights, line, h, kind)?;
    }
    let n_chains = chains.ok_or(ParseError::Syntax {
        line: source.lines().count().max(1),
        column: 1,
        msg: "missing `chains` line".into(),
    })?;
    let d = GraphDivide {
        name: name.unwrap_or_else(|| "unnamed".into()),
        n_chains,
        connectors,
    };
    Ok((d, marks))
}

fn push(
    out: &mut Vec<Connector>,
    heights: &mut HashMap<i64, usize>,
    line: usize,
    h: i64,
    kind: Kind,
) -> Result<(), ParseError> {
    if heights.insert(h, line).is_some() {
        return Err(ParseError::DuplicateHeight { line, h });
    }
    out.push(Connector { h, kind });
    Ok(())
}

impl fmt::Display for GraphDivide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "divide {}", self.name)?;
        writeln!(f, "chains {}", self.n_chains)?;
        for c in &self.connectors {
            let h = c.h;
            match c.kind {
                Kind::Cross { i } => writeln!(f, "cross {i} {h}")?,
                Kind::Cap { i, j } => writeln!(f, "cap {i} {j} {h}")?,
                Kind::Cup { i, j } => writeln!(f, "cup {i} {j} {h}")?,
                Kind::YCap { i, mid, j, sign } => writeln!(f, "ycap {i} {mid} {j} {h} {}", sign.as_str())?,
                Kind::YCup { i, mid, j, sign } => writeln!(f, "ycup {i} {mid} {j} {h} {}", sign.as_str())?,
                Kind::End { i, side, sign } => {
                    writeln!(f, "end {i} {} {h} {}", side.as_str(), sign.as_str())?
                }
                Kind::Boundary { i, side } => writeln!(f, "boundary {i} {} {h}", side.as_str())?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Index into `connectors`, if the rule concerns one.
    pub connector: Option<usize>,
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivideError {
    #[error("invalid divide: {0}")]
    Invalid(String),
    #[error("unknown branch id {0}")]
    UnknownBranch(usize),
}

fn viol(v: &mut Vec<Violation>, connector: Option<usize>, rule: &str, detail: String) {
    v.push(Violation { connector, rule: rule.to_string(), detail });
}

pub fn validate(d: &GraphDivide) -> ValidationReport {
    let mut v = Vec::new();
    let n = d.n_chains;
    if n == 0 {
        viol(&mut v, None, "no chains", "chain count must be positive".into());
    }
    let mut seen_h: HashMap<i64, usize> = HashMap::new();
    let mut ends: BTreeMap<(usize, Side), Vec<usize>> = BTreeMap::new();
    let mut in_range = true;
    for (ci, c) in d.connectors.iter().enumerate() {
        if let Some(&prev) = seen_h.get(&c.h) {
            viol(&mut v, Some(ci), "duplicate height", format!("height {} also used by connector {prev}", c.h));
        }
        seen_h.insert(c.h, ci);
        let ranks_ok = match c.kind {
            Kind::Cross { i } => i < n,
            Kind::Cap { i, j } | Kind::Cup { i, j } => i < j && j <= n,
            Kind::YCap { i, mid, j, .. } | Kind::YCup { i, mid, j, .. } => i < mid && mid < j && j <= n,
            Kind::End { i, .. } | Kind::Boundary { i, .. } => i <= n,
        };
        if !ranks_ok {
            in_range = false;
            viol(&mut v, Some(ci), "rank out of range", format!("{:?}", c.kind));
            continue;
        }
        for e in c.kind.consumes() {
            ends.entry(e).or_default().push(ci);
        }
    }
    for r in 1..=n {
        for side in [Side::Bottom, Side::Top] {
            match ends.get(&(r, side)).map(Vec::len).unwrap_or(0) {
                1 => {}
                0 => viol(&mut v, None, "chain end unconsumed", format!("rank {r} {}", side.as_str())),
                _ => {
                    for &ci in &ends[&(r, side)] {
                        viol(&mut v, 
                            Some(ci),
                            "chain end consumed twice",
                            format!("rank {r} {}", side.as_str()),
                        );
                    }
                }
            }
        }
    }
    if !in_range || !v.is_empty() {
        return ValidationReport { ok: v.is_empty(), violations: v };
    }
    let top = |r: usize| d.connectors[ends[&(r, Side::Top)][0]].h;
    let bot = |r: usize| d.connectors[ends[&(r, Side::Bottom)][0]].h;
    let on_boundary = |r: usize, side: Side| matches!(d.connectors[ends[&(r, side)][0]].kind, Kind::Boundary { .. });
    for r in 1..=n {
        if bot(r) >= top(r) {
            viol(&mut v, None, "empty chain", format!("rank {r} bottom is not below its top"));
        }
    }
    for (ci, c) in d.connectors.iter().enumerate() {
        let h = c.h;
        match c.kind {
            Kind::Cross { i } => {
                for r in [i, i + 1] {
                    if !(bot(r) < h && h < top(r)) {
                        viol(&mut v, Some(ci), "cross outside chain extent", format!("rank {r} at height {h}"));
                    }
                }
            }
            Kind::Cap { i, j } | Kind::YCap { i, j, .. } => {
                let mid = match c.kind {
                    Kind::YCap { mid, .. } => Some(mid),
                    _ => None,
                };
                for k in i + 1..j {
                    if Some(k) != mid && top(k) >= h {
                        viol(&mut v, Some(ci), "fold over taller chain", format!("rank {k} reaches above {h}"));
                    } else if Some(k) != mid && on_boundary(k, Side::Top) {
                        viol(&mut v, Some(ci), "fold over boundary end", format!("rank {k} meets the boundary below {h}"));
                    }
                }
            }
            Kind::Cup { i, j } | Kind::YCup { i, j, .. } => {
                let mid = match c.kind {
                    Kind::YCup { mid, .. } => Some(mid),
                    _ => None,
                };
                for k in i + 1..j {
                    if Some(k) != mid && bot(k) <= h {
                        viol(&mut v, Some(ci), "fold under deeper chain", format!("rank {k} reaches below {h}"));
                    } else if Some(k) != mid && on_boundary(k, Side::Bottom) {
                        viol(&mut v, Some(ci), "fold under boundary end", format!("rank {k} meets the boundary above {h}"));
                    }
                }
            }
            Kind::End { .. } | Kind::Boundary { .. } => {}
        }
    }
    ValidationReport { ok: v.is_empty(), violations: v }
}

pub fn require_valid(d: &GraphDivide) -> Result<(), DivideError> {
    let r = validate(d);
    if r.ok {
        Ok(())
    } else {
        Err(DivideError::Invalid(
            r.violations
                .iter()
                .map(|v| format!("{}: {}", v.rule, v.detail))
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivideCounts {
    pub n: usize,
    pub delta: usize,
    pub m: usize,
    pub e1: usize,
    pub t3: usize,
    pub v: usize,
    pub euler_g: i64,
    pub branches: usize,
    pub circles: usize,
}

pub fn counts(d: &GraphDivide) -> Result<DivideCounts, DivideError> {
    require_valid(d)?;
    let mut c = DivideCounts {
        n: d.n_chains,
        delta: 0,
        m: 0,
        e1: 0,
        t3: 0,
        v: 0,
        euler_g: 0,
        branches: 0,
        circles: 0,
    };
    for x in &d.connectors {
        match x.kind {
            Kind::Cross { .. } => c.delta += 1,
            Kind::Cap { .. } | Kind::Cup { .. } => c.m += 1,
            Kind::YCap { .. } | Kind::YCup { .. } => {
                c.m += 1;
                c.t3 += 1;
            }
            Kind::End { .. } | Kind::Boundary { .. } => c.e1 += 1,
        }
    }
    c.v = c.e1 + c.t3;
    c.euler_g = (c.e1 as i64 - c.t3 as i64) / 2;
    let bs = branch_decomposition(d)?;
    c.branches = bs.len();
    c.circles = bs.iter().filter(|b| b.kind == BranchKind::Circle).count();
    Ok(c)
}

/// A maximal piece of one rank between consecutive crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Piece {
    pub rank: usize,
    /// Number of crossings on this rank below the piece.
    pub level: usize,
}

/// What lies beyond one end of a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Beyond {
    /// The curve continues into this piece end.
    Pass(Piece, Side),
    /// A vertex connector.
    Vertex(usize),
}

/// Pieces of every rank and the connectivity across their ends.
#[derive(Clone, Debug)]
pub struct PieceGraph {
    pub pieces: Vec<Piece>,
    pub links: HashMap<(Piece, Side), Beyond>,
    /// Heights `(bottom, top)` of each piece.
    pub extent: HashMap<Piece, (i64, i64)>,
    /// Connector at each piece end.
    pub via: HashMap<(Piece, Side), usize>,
}

pub fn piece_graph(d: &GraphDivide) -> PieceGraph {
    let n = d.n_chains;
    let mut cross_on: Vec<Vec<(i64, usize)>> = vec![Vec::new(); n + 2];
    for (ci, c) in d.connectors.iter().enumerate() {
        if let Kind::Cross { i } = c.kind {
            cross_on[i].push((c.h, ci));
            cross_on[i + 1].push((c.h, ci));
        }
    }
    for v in cross_on.iter_mut() {
        v.sort_unstable();
    }
    let mut end_at: HashMap<(usize, Side), usize> = HashMap::new();
    for (ci, c) in d.connectors.iter().enumerate() {
        for e in c.kind.consumes() {
            end_at.insert(e, ci);
        }
    }
    let mut pieces = Vec::new();
    let mut extent = HashMap::new();
    let mut links = HashMap::new();
    let mut via = HashMap::new();
    let level_at = |r: usize, h: i64| cross_on[r].iter().filter(|&&(hh, _)| hh < h).count();
    for r in 1..=n {
        let xs = &cross_on[r];
        let b = d.connectors[end_at[&(r, Side::Bottom)]].h;
        let t = d.connectors[end_at[&(r, Side::Top)]].h;
        for lv in 0..=xs.len() {
            let p = Piece { rank: r, level: lv };
            pieces.push(p);
            let lo = if lv == 0 { b } else { xs[lv - 1].0 };
            let hi = if lv == xs.len() { t } else { xs[lv].0 };
            extent.insert(p, (lo, hi));
        }
    }
    for (ci, c) in d.connectors.iter().enumerate() {
        let h = c.h;
        match c.kind {
            Kind::Cross { i } => {
                let lb = Piece { rank: i, level: level_at(i, h) };
                let rb = Piece { rank: i + 1, level: level_at(i + 1, h) };
                let la = Piece { rank: i, level: lb.level + 1 };
                let ra = Piece { rank: i + 1, level: rb.level + 1 };
                for (x, y) in [(lb, ra), (rb, la)] {
                    links.insert((x, Side::Top), Beyond::Pass(y, Side::Bottom));
                    links.insert((y, Side::Bottom), Beyond::Pass(x, Side::Top));
                    via.insert((x, Side::Top), ci);
                    via.insert((y, Side::Bottom), ci);
                }
            }
            _ => {
                let ends: Vec<(Piece, Side)> = c
                    .kind
                    .consumes()
                    .into_iter()
                    .map(|(r, s)| {
                        let lv = if s == Side::Top { cross_on[r].len() } else { 0 };
                        (Piece { rank: r, level: lv }, s)
                    })
                    .collect();
                for &e in &ends {
                    via.insert(e, ci);
                }
                match c.kind {
                    Kind::Cap { .. } | Kind::Cup { .. } => {
                        links.insert(ends[0], Beyond::Pass(ends[1].0, ends[1].1));
                        links.insert(ends[1], Beyond::Pass(ends[0].0, ends[0].1));
                    }
                    _ => {
                        for e in ends {
                            links.insert(e, Beyond::Vertex(ci));
                        }
                    }
                }
            }
        }
    }
    PieceGraph { pieces, links, extent, via }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    Interval,
    Tree,
    Circle,
    GraphWithCycle,
}

/// An edge of `G` between two vertex connectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub id: usize,
    pub kind: BranchKind,
    /// Indices into `connectors`, ascending.
    pub connectors: Vec<usize>,
    pub pieces: Vec<Piece>,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl Branch {
    /// `V - E`; circles count as one vertex and one edge.
    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
    }
}

/// Connected components of `G`. Branch ids are 1-based, ordered by lowest piece.
pub fn branch_decomposition(d: &GraphDivide) -> Result<Vec<Branch>, DivideError> {
    require_valid(d)?;
    let pg = piece_graph(d);
    let mut comp: HashMap<Piece, usize> = HashMap::new();
    let mut branches = Vec::new();
    for &start in &pg.pieces {
        if comp.contains_key(&start) {
            continue;
        }
        let id = branches.len() + 1;
        let mut stack = vec![start];
        let mut pieces = BTreeSet::new();
        let mut conns = BTreeSet::new();
        let mut verts = BTreeSet::new();
        comp.insert(start, id);
        while let Some(p) = stack.pop() {
            pieces.insert(p);
            for s in [Side::Bottom, Side::Top] {
                conns.insert(pg.via[&(p, s)]);
                let mut nbrs = Vec::new();
                match pg.links[&(p, s)] {
                    Beyond::Pass(q, _) => nbrs.push(q),
                    Beyond::Vertex(ci) => {
                        verts.insert(ci);
                        for (&(q, qs), &b) in &pg.links {
                            if b == Beyond::Vertex(ci) && (q, qs) != (p, s) {
                                nbrs.push(q);
                            }
                        }
                    }
                }
                for q in nbrs {
                    if let std::collections::hash_map::Entry::Vacant(e) = comp.entry(q) {
                        e.insert(id);
                        stack.push(q);
                    }
                }
            }
        }
        // Trace edges from every vertex half-edge.
        let mut edges = Vec::new();
        let mut seen_half: BTreeSet<(Piece, Side)> = BTreeSet::new();
        let mut starts: Vec<(Piece, Side)> = pg
            .links
            .iter()
            .filter(|(k, b)| pieces.contains(&k.0) && matches!(b, Beyond::Vertex(_)))
            .map(|(k, _)| *k)
            .collect();
        starts.sort();
        for (p0, s0) in starts {
            if seen_half.contains(&(p0, s0)) {
                continue;
            }
            let Beyond::Vertex(from) = pg.links[&(p0, s0)] else { unreachable!() };
            let (mut p, mut s) = (p0, s0);
            let mut path = vec![p];
            let to = loop {
                let exit = other(s);
                match pg.links[&(p, exit)] {
                    Beyond::Vertex(ci) => {
                        seen_half.insert((p, exit));
                        break ci;
                    }
                    Beyond::Pass(q, qs) => {
                        p = q;
                        s = qs;
                        path.push(p);
                    }
                }
            };
            seen_half.insert((p0, s0));
            edges.push(Edge { from, to, pieces: path });
        }
        let kind = if verts.is_empty() {
            BranchKind::Circle
        } else {
            match (verts.len() as i64 - edges.len() as i64, verts.iter().any(|&c| matches!(d.connectors[c].kind, Kind::YCap { .. } | Kind::YCup { .. }))) {
                (1, false) => BranchKind::Interval,
                (1, true) => BranchKind::Tree,
                _ => BranchKind::GraphWithCycle,
            }
        };
        let (vertices, edges) = if verts.is_empty() {
            // A circle: one notional vertex and one loop edge.
            (Vec::new(), Vec::new())
        } else {
            (verts.into_iter().collect(), edges)
        };
        branches.push(Branch {
            id,
            kind,
            connectors: conns.into_iter().collect(),
            pieces: pieces.into_iter().collect(),
            vertices,
            edges,
        });
    }
    Ok(branches)
}

/// The divide turned upside down in the plane (a half turn), heights kept non-negative.
pub fn half_turn(d: &GraphDivide) -> GraphDivide {
    let n = d.n_chains;
    let top = d.connectors.iter().map(|c| c.h).max().unwrap_or(0);
    let r = |i: usize| n + 1 - i;
    let side = |s: Side| match s {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
    };
    let mut connectors: Vec<Connector> = d
        .connectors
        .iter()
        .map(|c| {
            let kind = match c.kind {
                Kind::Cross { i } => Kind::Cross { i: n - i },
                Kind::Cap { i, j } => Kind::Cup { i: r(j), j: r(i) },
                Kind::Cup { i, j } => Kind::Cap { i: r(j), j: r(i) },
                Kind::YCap { i, mid, j, sign } => Kind::YCup { i: r(j), mid: r(mid), j: r(i), sign },
                Kind::YCup { i, mid, j, sign } => Kind::YCap { i: r(j), mid: r(mid), j: r(i), sign },
                Kind::End { i, side: s, sign } => Kind::End { i: r(i), side: side(s), sign },
                Kind::Boundary { i, side: s } => Kind::Boundary { i: r(i), side: side(s) },
            };
            Connector { h: top - c.h, kind }
        })
        .collect();
    connectors.sort_by_key(|c| c.h);
    GraphDivide { name: d.name.clone(), n_chains: n, connectors }
}

/// Flips the sign of every signed vertex on the selected branches.
pub fn flip_signs(d: &GraphDivide, branch_ids: &[usize]) -> Result<GraphDivide, DivideError> {
    let bs = branch_decomposition(d)?;
    let mut targets = BTreeSet::new();
    for &id in branch_ids {
        let b = bs.iter().find(|b| b.id == id).ok_or(DivideError::UnknownBranch(id))?;
        targets.extend(b.vertices.iter().copied());
    }
    let mut out = d.clone();
    for ci in targets {
        let k = out.connectors[ci].kind;
        if let Some(s) = k.sign() {
            out.connectors[ci].kind = k.with_sign(s.flip());
        }
    }
    Ok(out)
}

/// Flips every signed vertex.
pub fn flip_all(d: &GraphDivide) -> GraphDivide {
    let mut out = d.clone();
    for c in out.connectors.iter_mut() {
        if let Some(s) = c.kind.sign() {
            c.kind = c.kind.with_sign(s.flip());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNKNOT: &str = "divide u\nchains 1\nend 1 bottom 0 -\nend 1 top 10 -\n";

    #[test]
    fn parses_and_round_trips() {
        let d = parse_divide(UNKNOT).unwrap();
        assert_eq!(d.n_chains, 1);
        assert_eq!(d.connectors.len(), 2);
        assert_eq!(parse_divide(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn reports_syntax_positions() {
        let e = parse_divide("chains 1\nend 1 sideways 0 -\n").unwrap_err();
        assert_eq!(e, ParseError::Syntax { line: 2, column: 7, msg: "expected `top` or `bottom`, found `sideways`".into() });
        assert!(matches!(parse_divide("chains 1\nfold 1 2\n"), Err(ParseError::UnknownKeyword { line: 2, .. })));
        assert!(matches!(
            parse_divide("chains 2\ncap 1 2 5\ncup 1 2 5\n"),
            Err(ParseError::DuplicateHeight { line: 3, h: 5 })
        ));
    }

    #[test]
    fn double_consumption_fails_validation() {
        let d = parse_divide("chains 2\ncap 1 2 5\ncap 1 2 7").unwrap();
        let r = validate(&d);
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.rule == "chain end consumed twice"));
    }

    #[test]
    fn circle_branch() {
        let d = parse_divide("chains 2\ncup 1 2 0\ncap 1 2 10").unwrap();
        let bs = branch_decomposition(&d).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].kind, BranchKind::Circle);
    }
}
