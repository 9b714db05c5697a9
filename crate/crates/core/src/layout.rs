//! Planar realization of a divide on the integer grid.
//!
//! Every connector owns one horizontal band. Ranks sit at `x = rank * W`.
//! All coordinates are multiples of 4 before normalization, so every vertex
//! has `x + y` even and slope-±1 edges stay on the lattice.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagram::Pt;
use crate::divide::{piece_graph, require_valid, Beyond, DivideError, GraphDivide, Kind, Piece, Side, Sign};

/// Horizontal spacing of ranks.
pub const RANK_STEP: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    End(Sign),
    Boundary,
    Y(Sign),
}

impl VertexKind {
    pub fn degree(&self) -> usize {
        match self {
            VertexKind::Y(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridVertex {
    pub at: Pt,
    pub connector: usize,
    pub kind: VertexKind,
}

/// One edge of the graph (or one circle) as a polyline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridArc {
    pub points: Vec<Pt>,
    /// Closed arcs repeat no point; the last joins the first.
    pub closed: bool,
    /// Vertex indices at the first and last point of an open arc.
    pub ends: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridImmersion {
    pub arcs: Vec<GridArc>,
    pub vertices: Vec<GridVertex>,
    /// Double points with their source connector.
    pub double_points: Vec<(Pt, usize)>,
    /// Fold extremum points with their source connector.
    pub extrema: Vec<(Pt, usize)>,
}

struct Geometry {
    port: HashMap<(Piece, Side), Pt>,
    /// Path from one piece end to the next through a crossing or fold, endpoints included.
    pass: HashMap<(Piece, Side), Vec<Pt>>,
    /// Path from a vertex point out to a piece end, endpoints included.
    from_vertex: HashMap<(Piece, Side), Vec<Pt>>,
    vertex_at: HashMap<usize, Pt>,
    double_points: Vec<(Pt, usize)>,
    extrema: Vec<(Pt, usize)>,
}

fn geometry(d: &GraphDivide, pg: &crate::divide::PieceGraph) -> Geometry {
    let w = RANK_STEP;
    let band = w * d.n_chains as i64 + 8;
    let mut order: Vec<usize> = (0..d.connectors.len()).collect();
    order.sort_by_key(|&c| d.connectors[c].h);
    let mut g = Geometry {
        port: HashMap::new(),
        pass: HashMap::new(),
        from_vertex: HashMap::new(),
        vertex_at: HashMap::new(),
        double_points: Vec::new(),
        extrema: Vec::new(),
    };
    let end_piece = |ci: usize, r: usize, s: Side| {
        *pg.via
            .iter()
            .find(|(&(p, ps), &c)| c == ci && p.rank == r && ps == s)
            .map(|(k, _)| k)
            .expect("connector end without piece")
    };
    for (b, &ci) in order.iter().enumerate() {
        let y0 = b as i64 * band + 4;
        let x = |r: usize| r as i64 * w;
        match d.connectors[ci].kind {
            Kind::Cross { i } => {
                let ends: Vec<(Piece, Side)> = pg
                    .via
                    .iter()
                    .filter(|&(_, &c)| c == ci)
                    .map(|(k, _)| *k)
                    .collect();
                let find = |r: usize, s: Side| *ends.iter().find(|e| e.0.rank == r && e.1 == s).unwrap();
                let (lb, rb) = (find(i, Side::Top), find(i + 1, Side::Top));
                let (la, ra) = (find(i, Side::Bottom), find(i + 1, Side::Bottom));
                let (plb, prb) = ((x(i), y0), (x(i + 1), y0));
                let (pla, pra) = ((x(i), y0 + w), (x(i + 1), y0 + w));
                for (e, p) in [(lb, plb), (rb, prb), (la, pla), (ra, pra)] {
                    g.port.insert(e, p);
                }
                g.pass.insert(lb, vec![plb, pra]);
                g.pass.insert(ra, vec![pra, plb]);
                g.pass.insert(rb, vec![prb, pla]);
                g.pass.insert(la, vec![pla, prb]);
                g.double_points.push(((x(i) + w / 2, y0 + w / 2), ci));
            }
            kind @ (Kind::Cap { i, j } | Kind::Cup { i, j } | Kind::YCap { i, j, .. } | Kind::YCup { i, j, .. }) => {
                let span = (j - i) as i64 * w;
                let (mid, upper) = match kind {
                    Kind::Cap { .. } => (None, true),
                    Kind::Cup { .. } => (None, false),
                    Kind::YCap { mid, .. } => (Some(mid), true),
                    Kind::YCup { mid, .. } => (Some(mid), false),
                    _ => unreachable!(),
                };
                let a = match mid {
                    Some(m) => (m - i) as i64 * w + w / 2,
                    None => span / 2,
                };
                let rise = a.max(span - a);
                let (apex, pi, pj) = if upper {
                    let ay = y0 + rise;
                    ((x(i) + a, ay), (x(i), ay - a), (x(j), ay - (span - a)))
                } else {
                    let ay = y0;
                    ((x(i) + a, ay), (x(i), ay + a), (x(j), ay + (span - a)))
                };
                g.extrema.push((apex, ci));
                let side = if upper { Side::Top } else { Side::Bottom };
                let ei = end_piece(ci, i, side);
                let ej = end_piece(ci, j, side);
                g.port.insert(ei, pi);
                g.port.insert(ej, pj);
                match mid {
                    None => {
                        g.pass.insert(ei, vec![pi, apex, pj]);
                        g.pass.insert(ej, vec![pj, apex, pi]);
                    }
                    Some(m) => {
                        let v = if upper { (x(m), apex.1 - w / 2) } else { (x(m), apex.1 + w / 2) };
                        let em = end_piece(ci, m, side);
                        g.port.insert(em, v);
                        g.vertex_at.insert(ci, v);
                        g.from_vertex.insert(ei, vec![v, pi]);
                        g.from_vertex.insert(ej, vec![v, apex, pj]);
                        g.from_vertex.insert(em, vec![v]);
                    }
                }
            }
            Kind::End { i, side, .. } | Kind::Boundary { i, side } => {
                let e = end_piece(ci, i, side);
                let p = (x(i), y0);
                g.port.insert(e, p);
                g.vertex_at.insert(ci, p);
                g.from_vertex.insert(e, vec![p]);
            }
        }
    }
    g
}

fn flip(s: Side) -> Side {
    match s {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
    }
}

fn push_path(out: &mut Vec<Pt>, path: impl IntoIterator<Item = Pt>) {
    for p in path {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
}

/// Drops repeated points and interior points of straight runs.
pub(crate) fn simplify_polyline(pts: &[Pt], closed: bool) -> Vec<Pt> {
    let mut v: Vec<Pt> = Vec::with_capacity(pts.len());
    for &p in pts {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    if closed {
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
    }
    let collinear = |a: Pt, b: Pt, c: Pt| {
        let (d1, d2) = ((b.0 - a.0, b.1 - a.1), (c.0 - b.0, c.1 - b.1));
        d1.0 * d2.1 - d1.1 * d2.0 == 0 && d1.0 * d2.0 + d1.1 * d2.1 > 0
    };
    let mut changed = true;
    while changed && v.len() > 2 {
        changed = false;
        let n = v.len();
        for k in 0..n {
            let lo = if closed { (k + n - 1) % n } else if k == 0 { continue } else { k - 1 };
            let hi = if closed { (k + 1) % n } else if k + 1 == n { continue } else { k + 1 };
            if collinear(v[lo], v[k], v[hi]) {
                v.remove(k);
                changed = true;
                break;
            }
        }
    }
    v
}

/// Realizes a valid divide: ranks vertical, connectors in their bands.
pub fn embed(d: &GraphDivide) -> Result<GridImmersion, DivideError> {
    require_valid(d)?;
    let pg = piece_graph(d);
    let g = geometry(d, &pg);
    let mut vertices = Vec::new();
    let mut vid = HashMap::new();
    let mut vcons: Vec<usize> = (0..d.connectors.len()).filter(|&c| d.connectors[c].kind.is_vertex()).collect();
    vcons.sort_by_key(|&c| d.connectors[c].h);
    for ci in vcons {
        let kind = match d.connectors[ci].kind {
            Kind::End { sign, .. } => VertexKind::End(sign),
            Kind::Boundary { .. } => VertexKind::Boundary,
            Kind::YCap { sign, .. } | Kind::YCup { sign, .. } => VertexKind::Y(sign),
            _ => unreachable!(),
        };
        vid.insert(ci, vertices.len());
        vertices.push(GridVertex { at: g.vertex_at[&ci], connector: ci, kind });
    }
    let mut arcs = Vec::new();
    let mut used: HashMap<(Piece, Side), bool> = HashMap::new();
    let mut starts: Vec<(Piece, Side)> = pg
        .links
        .iter()
        .filter(|(_, b)| matches!(b, Beyond::Vertex(_)))
        .map(|(k, _)| *k)
        .collect();
    starts.sort();
    let walk = |p0: Piece, s0: Side, pts: &mut Vec<Pt>, used: &mut HashMap<(Piece, Side), bool>| {
        let (mut p, mut s) = (p0, s0);
        loop {
            used.insert((p, s), true);
            push_path(pts, [g.port[&(p, s)]]);
            let exit = flip(s);
            used.insert((p, exit), true);
            push_path(pts, [g.port[&(p, exit)]]);
            match pg.links[&(p, exit)] {
                Beyond::Vertex(ci) => return Some((ci, (p, exit))),
                Beyond::Pass(q, qs) => {
                    push_path(pts, g.pass[&(p, exit)].iter().copied());
                    if (q, qs) == (p0, s0) {
                        return None;
                    }
                    p = q;
                    s = qs;
                }
            }
        }
    };
    for (p0, s0) in starts {
        if used.contains_key(&(p0, s0)) {
            continue;
        }
        let Beyond::Vertex(from) = pg.links[&(p0, s0)] else { unreachable!() };
        let mut pts = Vec::new();
        push_path(&mut pts, g.from_vertex[&(p0, s0)].iter().copied());
        let (to, last) = walk(p0, s0, &mut pts, &mut used).expect("open edge");
        let back: Vec<Pt> = g.from_vertex[&last].iter().rev().copied().collect();
        push_path(&mut pts, back);
        arcs.push(GridArc {
            points: simplify_polyline(&pts, false),
            closed: false,
            ends: Some((vid[&from], vid[&to])),
        });
    }
    for &p in &pg.pieces {
        if used.contains_key(&(p, Side::Bottom)) {
            continue;
        }
        let mut pts = Vec::new();
        let r = walk(p, Side::Bottom, &mut pts, &mut used);
        debug_assert!(r.is_none());
        arcs.push(GridArc {
            points: simplify_polyline(&pts, true),
            closed: true,
            ends: None,
        });
    }
    Ok(GridImmersion {
        arcs,
        vertices,
        double_points: g.double_points,
        extrema: g.extrema,
    })
}

fn zigzag(a: Pt, b: Pt) -> Vec<Pt> {
    let (x, y0, y1) = (a.0, a.1, b.1);
    let step = if y1 > y0 { 1 } else { -1 };
    let n = (y1 - y0).abs();
    debug_assert!(n % 2 == 0, "odd vertical run");
    (0..=n).map(|k| (x + (k % 2), y0 + step * k)).collect()
}

/// Replaces every vertical run by a zigzag of unit diagonals bulging right.
pub fn normalize_slopes(g: &GridImmersion) -> GridImmersion {
    let arcs = g
        .arcs
        .iter()
        .map(|arc| {
            let n = arc.points.len();
            let segs = if arc.closed { n } else { n - 1 };
            let mut pts = Vec::new();
            for k in 0..segs {
                let (a, b) = (arc.points[k], arc.points[(k + 1) % n]);
                if a.0 == b.0 {
                    push_path(&mut pts, zigzag(a, b));
                } else {
                    debug_assert_eq!((a.0 - b.0).abs(), (a.1 - b.1).abs());
                    push_path(&mut pts, [a, b]);
                }
            }
            GridArc {
                points: simplify_polyline(&pts, arc.closed),
                closed: arc.closed,
                ends: arc.ends,
            }
        })
        .collect();
    GridImmersion { arcs, ..g.clone() }
}

impl GridImmersion {
    pub fn is_slope_normalized(&self) -> bool {
        self.arcs.iter().all(|a| {
            let n = a.points.len();
            let segs = if a.closed { n } else { n - 1 };
            (0..segs).all(|k| {
                let (p, q) = (a.points[k], a.points[(k + 1) % n]);
                (p.0 - q.0).abs() == (p.1 - q.1).abs() && p != q
            })
        })
    }

    /// Corners where the height is locally extremal, over all arcs.
    pub fn vertical_extrema(&self) -> usize {
        let mut count = 0;
        for a in &self.arcs {
            let n = a.points.len();
            let range: Box<dyn Iterator<Item = usize>> =
                if a.closed { Box::new(0..n) } else { Box::new(1..n.saturating_sub(1)) };
            for k in range {
                let (p, c, q) = (a.points[(k + n - 1) % n], a.points[k], a.points[(k + 1) % n]);
                let (u, v) = (c.1 - p.1, q.1 - c.1);
                if u.signum() * v.signum() < 0 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Transversal double points between arc interiors, counted geometrically.
    pub fn count_double_points(&self) -> usize {
        let mut segs = Vec::new();
        for a in &self.arcs {
            let n = a.points.len();
            let m = if a.closed { n } else { n - 1 };
            for k in 0..m {
                segs.push((a.points[k], a.points[(k + 1) % n]));
            }
        }
        let mut pts = std::collections::BTreeSet::new();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if let Some(p) = proper_crossing(segs[i], segs[j]) {
                    pts.insert(p);
                }
            }
        }
        pts.len()
    }
}

/// Interior crossing point of two segments as a reduced rational `(x, y, den)`.
pub(crate) fn proper_crossing(s: (Pt, Pt), t: (Pt, Pt)) -> Option<(i128, i128, i128)> {
    let cr = |a: (i64, i64), b: (i64, i64)| a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
    let d1 = (s.1 .0 - s.0 .0, s.1 .1 - s.0 .1);
    let d2 = (t.1 .0 - t.0 .0, t.1 .1 - t.0 .1);
    let den = cr(d1, d2);
    if den == 0 {
        return None;
    }
    let w = (t.0 .0 - s.0 .0, t.0 .1 - s.0 .1);
    let (tn, un) = (cr(w, d2), cr(w, d1));
    let inside = |n: i128| if den > 0 { n > 0 && n < den } else { n < 0 && n > den };
    if !(inside(tn) && inside(un)) {
        return None;
    }
    let (mut x, mut y, mut q) = (
        s.0 .0 as i128 * den + tn * d1.0 as i128,
        s.0 .1 as i128 * den + tn * d1.1 as i128,
        den,
    );
    if q < 0 {
        (x, y, q) = (-x, -y, -q);
    }
    let g = gcd(gcd(x.abs(), y.abs()), q);
    Some((x / g, y / g, q / g))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;

    #[test]
    fn unknot_is_one_segment() {
        let d = parse_divide("chains 1\nend 1 bottom 0 -\nend 1 top 10 -").unwrap();
        let g = embed(&d).unwrap();
        assert_eq!(g.arcs.len(), 1);
        assert_eq!(g.arcs[0].points.len(), 2);
        assert_eq!(g.vertices.len(), 2);
        let n = normalize_slopes(&g);
        assert!(n.is_slope_normalized());
        assert_eq!(n.vertical_extrema(), 0);
    }

    #[test]
    fn zigzag_of_length_two() {
        assert_eq!(zigzag((0, 0), (0, 2)), vec![(0, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn alpha_keeps_one_double_point() {
        let d = parse_divide("chains 2\nend 1 bottom 0 -\nend 2 bottom 1 -\ncross 1 3\ncap 1 2 5").unwrap();
        let g = embed(&d).unwrap();
        assert_eq!(g.count_double_points(), 1);
        let n = normalize_slopes(&g);
        assert!(n.is_slope_normalized());
        assert_eq!(n.count_double_points(), 1);
        assert_eq!(n.vertical_extrema(), 1);
    }

    #[test]
    fn circle_is_closed() {
        let d = parse_divide("chains 2\ncup 1 2 0\ncap 1 2 10").unwrap();
        let g = normalize_slopes(&embed(&d).unwrap());
        assert_eq!(g.arcs.len(), 1);
        assert!(g.arcs[0].closed);
        assert_eq!(g.count_double_points(), 0);
        assert_eq!(g.vertical_extrema(), 2);
    }
}
