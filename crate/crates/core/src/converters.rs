//! Graph divides built from other presentations.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::BraidWord;
use crate::divide::{
    branch_decomposition, parse_tree_records, piece_graph, Beyond, BranchKind, Connector, DivideError, GraphDivide,
    Kind, ParseError, Piece, Side, Sign, TreeMarks,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("letter {0} is not a positive generator")]
    NotPositive(i32),
    #[error("generator {letter} out of range for {strands} strands")]
    OutOfRange { letter: i32, strands: u32 },
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("branch {0} contains a cycle")]
    Cycle(usize),
    #[error("tree divides must stay off the disk boundary")]
    TouchesBoundary,
    #[error("degree-2 mark at rank {rank}, height {h}: {why}")]
    BadMark { rank: usize, h: i64, why: String },
}

/// A tree divide with unsigned vertices, degree-2 marks and isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDivideInput {
    pub divide: GraphDivide,
    pub marks: TreeMarks,
}

pub fn parse_tree_divide(source: &str) -> Result<TreeDivideInput, ParseError> {
    parse_tree_records(source).map(|(divide, marks)| TreeDivideInput { divide, marks })
}

/// A divide whose link is the closure of the positive braid `w`.
///
/// The graph is the spine of the canonical Seifert surface: one vertical path
/// per strand and one rung per letter, stacked in word order. Each path gets a
/// zone of ranks, newest piece leftmost; the rungs between two zones are kept
/// oldest first. Every rung ends in a Y-cup on its right path and a Y-cap on
/// its left path, with opposite signs, and each path hooks around its vertex
/// with one fold.
pub fn positive_braid_to_divide(w: &BraidWord) -> Result<GraphDivide, ConvertError> {
    let n = w.strands as usize;
    for &l in &w.letters {
        if l <= 0 {
            return Err(ConvertError::NotPositive(l));
        }
        if l as usize >= n {
            return Err(ConvertError::OutOfRange { letter: l, strands: w.strands });
        }
    }
    // Chains are numbered in creation order and ranked at the end.
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut zones: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut rungs: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut cur = vec![0usize; n + 1];
    let mut events: Vec<(i64, Kind)> = Vec::new();
    for s in 1..=n {
        cur[s] = fresh();
        zones[s].push(cur[s]);
        events.push((0, Kind::End { i: cur[s], side: Side::Bottom, sign: Sign::Minus }));
    }
    for (k, &l) in w.letters.iter().enumerate() {
        let (g, t) = (l as usize, 4 * k as i64 + 1);
        let r = fresh();
        rungs[g].push(r);
        // Right path: Y-cup hooked by a cap over the old piece.
        let (hk, ra) = (fresh(), fresh());
        zones[g + 1].extend([hk, ra]);
        events.push((t, Kind::YCup { i: r, mid: ra, j: hk, sign: Sign::Plus }));
        events.push((t + 1, Kind::Cap { i: hk, j: cur[g + 1] }));
        cur[g + 1] = ra;
        // Left path: Y-cap hooked by a cup under the new piece.
        let (h1, h2) = (fresh(), fresh());
        zones[g].extend([h1, h2]);
        events.push((t + 2, Kind::Cup { i: h2, j: h1 }));
        events.push((t + 3, Kind::YCap { i: h1, mid: cur[g], j: r, sign: Sign::Minus }));
        cur[g] = h2;
    }
    let top = 4 * w.letters.len() as i64 + 1;
    for &c in &cur[1..] {
        events.push((top, Kind::End { i: c, side: Side::Top, sign: Sign::Minus }));
    }
    let mut rank = vec![0usize; next];
    let order = (1..=n).flat_map(|s| zones[s].iter().rev().chain(&rungs[s]));
    for (r, &c) in order.enumerate() {
        rank[c] = r + 1;
    }
    // Same-height events never share a chain end, so any tie order is valid.
    events.sort_by_key(|e| e.0);
    let connectors = events
        .into_iter()
        .enumerate()
        .map(|(h, (_, kind))| Connector { h: h as i64, kind: renumber(kind, &rank) })
        .collect();
    Ok(GraphDivide { name: "positive-braid".into(), n_chains: next, connectors })
}

fn renumber(kind: Kind, rank: &[usize]) -> Kind {
    let r = |c: usize| rank[c];
    match kind {
        Kind::Cross { i } => Kind::Cross { i: r(i) },
        Kind::Cap { i, j } => Kind::Cap { i: r(i), j: r(j) },
        Kind::Cup { i, j } => Kind::Cup { i: r(i), j: r(j) },
        Kind::YCap { i, mid, j, sign } => Kind::YCap { i: r(i), mid: r(mid), j: r(j), sign },
        Kind::YCup { i, mid, j, sign } => Kind::YCup { i: r(i), mid: r(mid), j: r(j), sign },
        Kind::End { i, side, sign } => Kind::End { i: r(i), side, sign },
        Kind::Boundary { i, side } => Kind::Boundary { i: r(i), side },
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
    }
}

struct TreeEdge {
    ends: [usize; 2],
    /// Positions of the remaining degree-2 marks, increasing away from `ends[0]`.
    marks: Vec<(usize, i64)>,
}

/// The signed graph divide whose link is the link of the tree divide `t`.
///
/// Every vertex starts with sign `−`. A trivalent vertex whose three edges
/// each carry a degree-2 mark takes `+` and absorbs the nearest mark on each;
/// an endpoint next to a mark takes `+` and absorbs it. Each edge left with an
/// odd number of marks pushes one mark towards its nearer leaf (ties to the
/// smaller rank): the mark flips every vertex it passes and is absorbed by the
/// leaves beyond. With a seed, each branch independently has all its signs
/// flipped, standing for an orientation of its doubled curve that disagrees
/// with the clockwise one.
pub fn gibson_tree_to_graph_divide(t: &TreeDivideInput, seed: Option<u64>) -> Result<GraphDivide, ConvertError> {
    let d = &t.divide;
    if d.connectors.iter().any(|c| matches!(c.kind, Kind::Boundary { .. })) {
        return Err(ConvertError::TouchesBoundary);
    }
    // Input holding only isolated vertices has no chains to decompose.
    let empty = d.n_chains == 0 && d.connectors.is_empty();
    let branches = if empty { Vec::new() } else { branch_decomposition(d)? };
    if let Some(b) = branches.iter().find(|b| matches!(b.kind, BranchKind::Circle | BranchKind::GraphWithCycle)) {
        return Err(ConvertError::Cycle(b.id));
    }
    let pg = piece_graph(d);

    // Locate each mark on an edge, as (piece index along the edge, oriented height).
    let mut edges = Vec::new();
    let mut on_piece: HashMap<Piece, (usize, usize, Side)> = HashMap::new();
    for b in &branches {
        for e in &b.edges {
            let p0 = e.pieces[0];
            let mut s = [Side::Bottom, Side::Top]
                .into_iter()
                .find(|&s| pg.links[&(p0, s)] == Beyond::Vertex(e.from))
                .expect("edge starts at its vertex");
            for (k, &p) in e.pieces.iter().enumerate() {
                on_piece.insert(p, (edges.len(), k, s));
                if let Beyond::Pass(_, qs) = pg.links[&(p, other(s))] {
                    s = qs;
                }
            }
            edges.push(TreeEdge { ends: [e.from, e.to], marks: Vec::new() });
        }
    }
    for &(rank, h) in &t.marks.deg2 {
        let bad = |why: &str| ConvertError::BadMark { rank, h, why: why.into() };
        let piece = pg
            .pieces
            .iter()
            .find(|p| p.rank == rank && pg.extent[p].0 < h && h < pg.extent[p].1)
            .ok_or_else(|| bad("not inside a chain piece"))?;
        let (ei, k, entry) = on_piece[piece];
        let pos = (k, if entry == Side::Bottom { h } else { -h });
        if edges[ei].marks.contains(&pos) {
            return Err(bad("duplicate mark"));
        }
        edges[ei].marks.push(pos);
    }
    for e in edges.iter_mut() {
        e.marks.sort_unstable();
    }

    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ei, e) in edges.iter().enumerate() {
        for &v in &e.ends {
            incident.entry(v).or_default().push(ei);
        }
    }
    let is_leaf = |v: usize| matches!(d.connectors[v].kind, Kind::End { .. });
    let take_nearest = |e: &mut TreeEdge, v: usize| {
        if e.ends[0] == v {
            e.marks.remove(0);
        } else {
            e.marks.pop();
        }
    };
    let mut plus: HashMap<usize, bool> = HashMap::new();
    for (&v, es) in &incident {
        if !is_leaf(v) && es.iter().all(|&ei| !edges[ei].marks.is_empty()) {
            for &ei in es {
                take_nearest(&mut edges[ei], v);
            }
            plus.insert(v, true);
        }
    }
    for (&v, es) in &incident {
        if is_leaf(v) && !edges[es[0]].marks.is_empty() {
            take_nearest(&mut edges[es[0]], v);
            plus.insert(v, true);
        }
    }

    // Nearest leaf beyond `v`, looking away from edge `skip`: (distance, rank).
    let leaf_rank = |v: usize| match d.connectors[v].kind {
        Kind::End { i, .. } => i,
        _ => unreachable!(),
    };
    let nearest_leaf = |v: usize, skip: usize| {
        let mut queue = VecDeque::from([(v, skip, 0usize)]);
        let mut best: Option<(usize, usize)> = None;
        while let Some((w, from, dist)) = queue.pop_front() {
            if is_leaf(w) {
                let found = (dist, leaf_rank(w));
                best = Some(best.map_or(found, |b| b.min(found)));
                continue;
            }
            for &ei in &incident[&w] {
                if ei != from {
                    let e = &edges[ei];
                    let next = if e.ends[0] == w { e.ends[1] } else { e.ends[0] };
                    queue.push_back((next, ei, dist + 1));
                }
            }
        }
        best.expect("a finite tree has leaves")
    };
    let mut flipped: HashMap<usize, bool> = HashMap::new();
    for ei in 0..edges.len() {
        if edges[ei].marks.len() % 2 == 0 {
            continue;
        }
        let [a, b] = edges[ei].ends;
        let toward = if nearest_leaf(a, ei) <= nearest_leaf(b, ei) { a } else { b };
        let mut stack = vec![(toward, ei)];
        while let Some((w, came)) = stack.pop() {
            *flipped.entry(w).or_default() ^= true;
            for &ej in &incident[&w] {
                if ej != came {
                    let e = &edges[ej];
                    stack.push((if e.ends[0] == w { e.ends[1] } else { e.ends[0] }, ej));
                }
            }
        }
    }

    let mut branch_flip: HashMap<usize, bool> = HashMap::new();
    if let Some(o) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(o);
        for b in &branches {
            let bit = rng.gen_bool(0.5);
            for &v in &b.vertices {
                branch_flip.insert(v, bit);
            }
        }
    }

    let mut events: Vec<((i64, u8, usize), Kind)> = Vec::new();
    for (ci, c) in d.connectors.iter().enumerate() {
        let kind = match c.kind.sign() {
            Some(_) => {
                let get = |m: &HashMap<usize, bool>| m.get(&ci).copied().unwrap_or(false);
                let positive = get(&plus) ^ get(&flipped) ^ get(&branch_flip);
                c.kind.with_sign(if positive { Sign::Plus } else { Sign::Minus })
            }
            None => c.kind,
        };
        events.push(((c.h, 0, ci), kind));
    }
    let mut n_chains = d.n_chains;
    let mut rng = seed.map(|o| ChaCha8Rng::seed_from_u64(o ^ 0x9e37_79b9_7f4a_7c15));
    for (k, &h) in t.marks.isolated.iter().enumerate() {
        n_chains += 1;
        let sign = match rng.as_mut().map(|r| r.gen_bool(0.5)) {
            Some(true) => Sign::Plus,
            _ => Sign::Minus,
        };
        events.push(((h, 1, k), Kind::End { i: n_chains, side: Side::Bottom, sign }));
        events.push(((h, 2, k), Kind::End { i: n_chains, side: Side::Top, sign }));
    }
    events.sort_by_key(|e| e.0);
    let connectors = events
        .into_iter()
        .enumerate()
        .map(|(h, (_, kind))| Connector { h: h as i64, kind })
        .collect();
    Ok(GraphDivide { name: d.name.clone(), n_chains, connectors })
}
