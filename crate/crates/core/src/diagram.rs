//! Oriented planar link diagrams as PD codes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One crossing `X[a,b,c,d]`, labels counterclockwise from the incoming under-arc.
///
/// `positive` means the over-strand runs from `d` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub pd: [u32; 4],
    pub positive: bool,
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// Positions `(in, out)` of the over-strand.
    pub fn over_positions(&self) -> (usize, usize) {
        if self.positive {
            (3, 1)
        } else {
            (1, 3)
        }
    }

    fn out_of(&self, pos_in: usize) -> usize {
        match pos_in {
            0 => 2,
            p if p == self.over_positions().0 => self.over_positions().1,
            _ => unreachable!("not an incoming position"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    /// Components that carry no crossing at all.
    pub free_loops: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arc label {0} does not occur exactly once as incoming and once as outgoing")]
    BadLabel(u32),
    #[error("degenerate position: {0}")]
    Degenerate(String),
}

impl LinkDiagram {
    pub fn unknot() -> Self {
        Self {
            crossings: Vec::new(),
            free_loops: 1,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops as usize
    }

    /// Checks that every label enters exactly one crossing and leaves exactly one.
    pub fn check(&self) -> Result<(), DiagramError> {
        let mut seen: HashMap<u32, (u32, u32)> = HashMap::new();
        for x in &self.crossings {
            let (oi, oo) = x.over_positions();
            for (pos, &l) in x.pd.iter().enumerate() {
                let e = seen.entry(l).or_default();
                if pos == 0 || pos == oi {
                    e.0 += 1;
                } else {
                    debug_assert!(pos == 2 || pos == oo);
                    e.1 += 1;
                }
            }
        }
        for (l, (i, o)) in seen {
            if i != 1 || o != 1 {
                return Err(DiagramError::BadLabel(l));
            }
        }
        Ok(())
    }

    /// Crossing-carrying components, each as its arc labels in traversal order.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut incoming: HashMap<u32, (usize, usize)> = HashMap::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            incoming.insert(x.pd[0], (ci, 0));
            incoming.insert(x.pd[x.over_positions().0], (ci, x.over_positions().0));
        }
        let mut labels: Vec<u32> = incoming.keys().copied().collect();
        labels.sort_unstable();
        let mut done: HashMap<u32, bool> = HashMap::new();
        let mut comps = Vec::new();
        for start in labels {
            if done.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut l = start;
            loop {
                done.insert(l, true);
                comp.push(l);
                let (ci, pos) = incoming[&l];
                let x = &self.crossings[ci];
                l = x.pd[x.out_of(pos)];
                if l == start {
                    break;
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Renumbers arcs `1..` consecutively along each component.
    pub fn relabel(&self) -> LinkDiagram {
        let mut map = HashMap::new();
        let mut next = 1u32;
        for comp in self.components() {
            for l in comp {
                map.insert(l, next);
                next += 1;
            }
        }
        LinkDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|x| Crossing {
                    pd: x.pd.map(|l| map[&l]),
                    positive: x.positive,
                })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// Disjoint union; labels of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let off = self
            .crossings
            .iter()
            .flat_map(|x| x.pd)
            .max()
            .unwrap_or(0);
        let mut out = self.clone();
        out.crossings.extend(other.crossings.iter().map(|x| Crossing {
            pd: x.pd.map(|l| l + off),
            positive: x.positive,
        }));
        out.free_loops += other.free_loops;
        out
    }

    /// Mirror image: every crossing switches over and under.
    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|x| {
                    let [a, b, c, d] = x.pd;
                    // The old over-in becomes the new under-in.
                    if x.positive {
                        Crossing { pd: [d, a, b, c], positive: false }
                    } else {
                        Crossing { pd: [b, c, d, a], positive: true }
                    }
                })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn to_pd_text(&self) -> String {
        let mut s = String::new();
        for x in &self.crossings {
            let [a, b, c, d] = x.pd;
            let _ = writeln!(s, "X[{a},{b},{c},{d}]");
        }
        for _ in 0..self.free_loops {
            s.push_str("O[]\n");
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pd": self.crossings.iter().map(|x| x.pd.to_vec()).collect::<Vec<_>>(),
            "signs": self.crossings.iter().map(Crossing::sign).collect::<Vec<_>>(),
            "components": self.components(),
            "free_loops": self.free_loops,
            "writhe": self.writhe(),
        })
    }
}

/// Index of a segment: segment `seg` of `curve` runs from vertex `seg` to `seg + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegRef {
    pub curve: usize,
    pub seg: usize,
}

pub type Pt = (i64, i64);

fn cross(a: Pt, b: Pt) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

/// A rational position `num/den` along a segment, `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        if den < 0 {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }
    fn cmp(&self, o: &Frac) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

/// Transversal intersection of two closed polylines' segments.
#[derive(Clone, Copy, Debug)]
pub struct Intersection {
    pub a: SegRef,
    pub b: SegRef,
}

fn seg(curves: &[Vec<Pt>], r: SegRef) -> (Pt, Pt) {
    let c = &curves[r.curve];
    (c[r.seg], c[(r.seg + 1) % c.len()])
}

fn on_segment(p: Pt, s: (Pt, Pt)) -> bool {
    let d = sub(s.1, s.0);
    let w = sub(p, s.0);
    cross(d, w) == 0
        && (w.0 as i128 * d.0 as i128 + w.1 as i128 * d.1 as i128) >= 0
        && (w.0 as i128 * d.0 as i128 + w.1 as i128 * d.1 as i128)
            <= (d.0 as i128 * d.0 as i128 + d.1 as i128 * d.1 as i128)
}

/// Transversal crossings between segments of closed polylines, each with its
/// position along both segments. Touching or overlapping segments are errors.
fn transversal_crossings(curves: &[Vec<Pt>]) -> Result<Vec<(SegRef, Frac, SegRef, Frac)>, DiagramError> {
    let mut segs = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        if c.len() < 2 {
            return Err(DiagramError::Degenerate(format!("curve {ci} too short")));
        }
        for si in 0..c.len() {
            let r = SegRef { curve: ci, seg: si };
            let (p, q) = seg(curves, r);
            if p == q {
                return Err(DiagramError::Degenerate(format!("zero-length segment {r:?}")));
            }
            segs.push(r);
        }
    }
    let bbox = |r: SegRef| {
        let (p, q) = seg(curves, r);
        (p.0.min(q.0), p.0.max(q.0), p.1.min(q.1), p.1.max(q.1))
    };
    let boxes: Vec<_> = segs.iter().map(|&r| bbox(r)).collect();
    // Uniform grid sized to the typical segment; a pair is tested only in the
    // cell holding the lower-left corner of the overlap of their boxes.
    let mut extents: Vec<i64> = boxes.iter().map(|b| (b.1 - b.0).max(b.3 - b.2)).collect();
    extents.sort_unstable();
    let cell = extents[extents.len() / 2].max(1) * 2;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        for cx in b.0.div_euclid(cell)..=b.1.div_euclid(cell) {
            for cy in b.2.div_euclid(cell)..=b.3.div_euclid(cell) {
                grid.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let mut pairs = Vec::new();
    for (&key, members) in &grid {
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                let (bi, bj) = (boxes[i], boxes[j]);
                if bj.1 < bi.0 || bj.0 > bi.1 || bj.3 < bi.2 || bj.2 > bi.3 {
                    continue;
                }
                let corner = (bi.0.max(bj.0).div_euclid(cell), bi.2.max(bj.2).div_euclid(cell));
                if corner == key {
                    pairs.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    pairs.sort_unstable();

    let mut found = Vec::new();
    for (i, j) in pairs {
        let (ri, rj) = (segs[i], segs[j]);
        {
            let (p, p2) = seg(curves, ri);
            let (q, q2) = seg(curves, rj);
            let adjacent_next = ri.curve == rj.curve
                && (ri.seg + 1) % curves[ri.curve].len() == rj.seg;
            let adjacent_prev = ri.curve == rj.curve
                && (rj.seg + 1) % curves[ri.curve].len() == ri.seg;
            let d1 = sub(p2, p);
            let d2 = sub(q2, q);
            let den = cross(d1, d2);
            if den == 0 {
                if cross(d1, sub(q, p)) != 0 {
                    continue;
                }
                let touching = [q, q2]
                    .iter()
                    .filter(|&&z| on_segment(z, (p, p2)))
                    .count()
                    + [p, p2].iter().filter(|&&z| on_segment(z, (q, q2))).count();
                let shared = (adjacent_next && p2 == q) || (adjacent_prev && q2 == p);
                if touching > 0 && !(shared && touching == 2) {
                    return Err(DiagramError::Degenerate(format!(
                        "collinear overlap {ri:?} {rj:?}"
                    )));
                }
                continue;
            }
            let t = Frac::new(cross(sub(q, p), d2), den);
            let u = Frac::new(cross(sub(q, p), d1), den);
            let zero = Frac { num: 0, den: 1 };
            let one = Frac { num: 1, den: 1 };
            let t_in = t.cmp(&zero) != Ordering::Less && t.cmp(&one) != Ordering::Greater;
            let u_in = u.cmp(&zero) != Ordering::Less && u.cmp(&one) != Ordering::Greater;
            if !(t_in && u_in) {
                continue;
            }
            let t_open = t.cmp(&zero) == Ordering::Greater && t.cmp(&one) == Ordering::Less;
            let u_open = u.cmp(&zero) == Ordering::Greater && u.cmp(&one) == Ordering::Less;
            if !(t_open && u_open) {
                let at_shared = (adjacent_next && t.cmp(&one) == Ordering::Equal && u.cmp(&zero) == Ordering::Equal)
                    || (adjacent_prev && t.cmp(&zero) == Ordering::Equal && u.cmp(&one) == Ordering::Equal);
                if at_shared {
                    continue;
                }
                return Err(DiagramError::Degenerate(format!(
                    "intersection at a vertex: {ri:?} {rj:?}"
                )));
            }
            found.push((ri, t, rj, u));
        }
    }
    Ok(found)
}


/// Crossing points of closed polylines, with the two segments meeting there.
pub fn crossing_points(curves: &[Vec<Pt>]) -> Result<Vec<(SegRef, SegRef, (f64, f64))>, DiagramError> {
    Ok(transversal_crossings(curves)?
        .into_iter()
        .map(|(a, t, b, _)| {
            let (p, q) = seg(curves, a);
            let f = t.num as f64 / t.den as f64;
            (a, b, (p.0 as f64 + f * (q.0 - p.0) as f64, p.1 as f64 + f * (q.1 - p.1) as f64))
        })
        .collect())
}

/// Builds an oriented diagram from closed polylines.
///
/// `is_over(p, q)` decides whether segment `p` passes over segment `q`
/// at their crossing. Every intersection must be a transversal crossing
/// interior to both segments.
pub fn from_polylines(
    curves: &[Vec<Pt>],
    is_over: impl Fn(SegRef, SegRef) -> bool,
) -> Result<LinkDiagram, DiagramError> {
    // (segment, position along it, crossing id, is_over)
    let mut events: Vec<(SegRef, Frac, usize, bool)> = Vec::new();
    let mut xings: Vec<(SegRef, SegRef)> = Vec::new(); // (under, over)
    for (ri, t, rj, u) in transversal_crossings(curves)? {
        let id = xings.len();
        let i_over = is_over(ri, rj);
        if i_over {
            xings.push((rj, ri));
        } else {
            xings.push((ri, rj));
        }
        events.push((ri, t, id, i_over));
        events.push((rj, u, id, !i_over));
    }

    let mut per_curve: Vec<Vec<(usize, Frac, usize, bool)>> = vec![Vec::new(); curves.len()];
    for (r, f, id, over) in events {
        per_curve[r.curve].push((r.seg, f, id, over));
    }
    let mut free_loops = 0;
    // labels[id] = [under_in, under_out, over_in, over_out]
    let mut labels = vec![[0u32; 4]; xings.len()];
    let mut next = 1u32;
    for evs in per_curve.iter_mut() {
        if evs.is_empty() {
            free_loops += 1;
            continue;
        }
        evs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let m = evs.len() as u32;
        let base = next;
        next += m;
        for (k, &(_, _, id, over)) in evs.iter().enumerate() {
            let k = k as u32;
            let out_label = base + k;
            let in_label = base + (k + m - 1) % m;
            let slot = if over { 2 } else { 0 };
            labels[id][slot] = in_label;
            labels[id][slot + 1] = out_label;
        }
    }
    let crossings = xings
        .iter()
        .zip(&labels)
        .map(|(&(under, over), l)| {
            let (u0, u1) = seg(curves, under);
            let (o0, o1) = seg(curves, over);
            let du = sub(u1, u0);
            let dov = sub(o1, o0);
            let positive = cross(dov, du) > 0;
            let [ui, uo, oi, oo] = *l;
            if positive {
                Crossing { pd: [ui, oo, uo, oi], positive }
            } else {
                Crossing { pd: [ui, oi, uo, oo], positive }
            }
        })
        .collect();
    Ok(LinkDiagram { crossings, free_loops })
}

/// Label classes merged by Reidemeister moves.
struct Labels {
    parent: HashMap<u32, u32>,
}

impl Labels {
    fn find(&mut self, l: u32) -> u32 {
        let mut root = l;
        while let Some(&p) = self.parent.get(&root) {
            root = p;
        }
        let mut cur = l;
        while let Some(&p) = self.parent.get(&cur) {
            if p == root {
                break;
            }
            self.parent.insert(cur, root);
            cur = p;
        }
        root
    }

    fn canon(&mut self, x: &Crossing) -> [u32; 4] {
        x.pd.map(|l| self.find(l))
    }

    /// Joins two arcs; `true` when they were already one arc, closing a free loop.
    fn join(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return true;
        }
        self.parent.insert(b, a);
        false
    }
}

/// Reidemeister I/II reduction. Never increases the crossing count.
pub fn simplify(diag: &LinkDiagram) -> LinkDiagram {
    let mut xs: Vec<Option<Crossing>> = diag.crossings.iter().copied().map(Some).collect();
    let mut free = diag.free_loops;
    let mut labels = Labels { parent: HashMap::new() };
    let mut changed = true;
    while changed {
        changed = false;
        // Reidemeister I
        for slot in xs.iter_mut() {
            let Some(x) = *slot else { continue };
            let p = labels.canon(&x);
            let Some(k) = (0..4).find(|&k| p[k] == p[(k + 1) % 4]) else { continue };
            *slot = None;
            if labels.join(p[(k + 2) % 4], p[(k + 3) % 4]) {
                free += 1;
            }
            changed = true;
        }
        // Reidemeister II
        let mut where_: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, x) in xs.iter().enumerate() {
            if let Some(x) = x {
                for l in labels.canon(x) {
                    where_.entry(l).or_default().push(i);
                }
            }
        }
        for occ in where_.values() {
            if occ.len() != 2 || occ[0] == occ[1] {
                continue;
            }
            let (i, j) = (occ[0], occ[1]);
            let (Some(xi), Some(xj)) = (xs[i], xs[j]) else { continue };
            let (pi, pj) = (labels.canon(&xi), labels.canon(&xj));
            if let Some((oi, oj, ui, uj)) = bigon(&pi, &pj) {
                xs[i] = None;
                xs[j] = None;
                for (a, b) in [(oi, oj), (ui, uj)] {
                    if labels.join(a, b) {
                        free += 1;
                    }
                }
                changed = true;
            }
        }
    }
    let crossings = xs
        .into_iter()
        .flatten()
        .map(|x| Crossing { pd: labels.canon(&x), ..x })
        .collect();
    LinkDiagram { crossings, free_loops: free }.relabel()
}

/// Outer labels `(over_i, over_j, under_i, under_j)` when the two crossings bound a
/// Reidemeister II bigon.
fn bigon(pi: &[u32; 4], pj: &[u32; 4]) -> Option<(u32, u32, u32, u32)> {
    for e in [pi[1], pi[3]] {
        for f in [pi[0], pi[2]] {
            let over_j = pj[1] == e || pj[3] == e;
            let under_j = pj[0] == f || pj[2] == f;
            if !(over_j && under_j) || e == f {
                continue;
            }
            let other = |p: &[u32; 4], a: usize, b: usize, skip: u32| if p[a] == skip { p[b] } else { p[a] };
            let oi = other(pi, 1, 3, e);
            let oj = other(pj, 1, 3, e);
            let ui = other(pi, 0, 2, f);
            let uj = other(pj, 0, 2, f);
            if [oi, oj, ui, uj].contains(&e) || [oi, oj, ui, uj].contains(&f) {
                continue;
            }
            // e and f must bound a bigon face.
            let turn = |p: &[u32; 4]| {
                let pe = p.iter().position(|&l| l == e).unwrap();
                let pf = p.iter().position(|&l| l == f).unwrap();
                (pf + 4 - pe) % 4
            };
            if turn(pi) != turn(pj) {
                return Some((oi, oj, ui, uj));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: i64, y0: i64, s: i64) -> Vec<Pt> {
        vec![(x0, y0), (x0 + s, y0), (x0 + s, y0 + s), (x0, y0 + s)]
    }

    #[test]
    fn disjoint_squares_are_free_loops() {
        let d = from_polylines(&[square(0, 0, 2), square(5, 5, 2)], |_, _| true).unwrap();
        assert_eq!(d.crossings.len(), 0);
        assert_eq!(d.component_count(), 2);
    }

    #[test]
    fn overlapping_squares_give_two_crossings() {
        let d = from_polylines(&[square(0, 0, 4), square(2, 2, 4)], |a, _| a.curve == 0).unwrap();
        d.check().unwrap();
        assert_eq!(d.crossings.len(), 2);
        assert_eq!(d.component_count(), 2);
        let s = simplify(&d);
        assert_eq!(s.crossings.len(), 0);
        assert_eq!(s.free_loops, 2);
    }

    #[test]
    fn vertex_touch_is_degenerate() {
        let r = from_polylines(&[square(0, 0, 2), square(2, 2, 2)], |_, _| true);
        assert!(matches!(r, Err(DiagramError::Degenerate(_))));
    }
}
