//! The doubling of a slope-normalized graph divide.
//!
//! Work happens in rotated coordinates `p = (x + y) / 2`, `q = (y - x) / 2`,
//! where slope-±1 edges are axis-parallel. The graph is scaled by
//! [`SCALE`] and each edge is offset by one unit on either side.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Pt;
use crate::layout::{proper_crossing, simplify_polyline, GridImmersion, VertexKind};
use crate::divide::Sign;

pub const SCALE: i64 = 16;
/// Distance from a vertex at which edge strands hand over to the vertex template.
const TRIM: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    Sharp,
    Loop,
    VertexTurn,
    PreExisting,
}

/// Closed oriented curves with slope ±1 edges on the integer grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedDivide {
    pub curves: Vec<Vec<Pt>>,
    /// Centres of local constructions, in curve coordinates.
    pub marks: Vec<(Pt, Origin)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub sharp: usize,
    pub loops: usize,
    pub vertex_turn: usize,
    pub pre_existing: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.sharp + self.loops + self.vertex_turn + self.pre_existing
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DoublingError {
    #[error("immersion is not slope-normalized")]
    NotNormalized,
    #[error("vertex {0} has an unsupported local shape")]
    BadVertex(usize),
}

type V2 = (i64, i64);

fn to_pq(p: Pt) -> V2 {
    debug_assert!((p.0 + p.1) % 2 == 0);
    ((p.0 + p.1) / 2, (p.1 - p.0) / 2)
}

fn to_xy(v: V2) -> Pt {
    (v.0 - v.1, v.0 + v.1)
}

fn add(a: V2, b: V2) -> V2 {
    (a.0 + b.0, a.1 + b.1)
}

fn mul(k: i64, a: V2) -> V2 {
    (k * a.0, k * a.1)
}

fn rot(d: V2) -> V2 {
    (-d.1, d.0)
}

fn unit(a: V2, b: V2) -> V2 {
    ((b.0 - a.0).signum(), (b.1 - a.1).signum())
}

/// Left offset of a directed open polyline, trimmed at both ends.
fn left_strand(pts: &[V2]) -> Vec<V2> {
    let m = pts.len() - 1;
    let dirs: Vec<V2> = (0..m).map(|k| unit(pts[k], pts[k + 1])).collect();
    let mut out = vec![add(add(pts[0], mul(TRIM, dirs[0])), rot(dirs[0]))];
    for k in 1..m {
        out.push(add(pts[k], add(rot(dirs[k - 1]), rot(dirs[k]))));
    }
    out.push(add(add(pts[m], mul(-TRIM, dirs[m - 1])), rot(dirs[m - 1])));
    out
}

/// Left offset of a closed polygon.
fn left_loop(pts: &[V2]) -> Vec<V2> {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let din = unit(pts[(k + n - 1) % n], pts[k]);
            let dout = unit(pts[k], pts[(k + 1) % n]);
            add(pts[k], add(rot(din), rot(dout)))
        })
        .collect()
}

/// Maps a template point given in a frame where local `(0, 1)` is `up`.
fn frame(v: V2, up: V2, local: V2) -> V2 {
    // Rotation taking (0,1) to `up` takes (1,0) to -rot(up).
    let ex = mul(-1, rot(up));
    add(v, add(mul(local.0, ex), mul(local.1, up)))
}

const HAIRPIN: [V2; 4] = [(-TRIM, 1), (1, 1), (1, -1), (-TRIM, -1)];
const LOOP: [V2; 6] = [(-TRIM, 1), (0, 1), (0, -3), (2, -3), (2, -1), (-TRIM, -1)];

/// Builds `d(P)` from a slope-normalized immersion.
pub fn double(g: &GridImmersion) -> Result<OrientedDivide, DoublingError> {
    if !g.is_slope_normalized() {
        return Err(DoublingError::NotNormalized);
    }
    let arcs: Vec<Vec<V2>> = g
        .arcs
        .iter()
        .map(|a| a.points.iter().map(|&p| mul(SCALE, to_pq(p))).collect())
        .collect();
    let mut curves: Vec<Vec<V2>> = Vec::new();
    let mut marks: Vec<(Pt, Origin)> = g
        .double_points
        .iter()
        .map(|&(p, _)| (to_xy(mul(SCALE, to_pq(p))), Origin::Sharp))
        .collect();

    // Edge-ends at each vertex: (arc, at_start) with outward direction.
    let mut incident: HashMap<usize, Vec<(usize, bool, V2)>> = HashMap::new();
    for (ai, a) in g.arcs.iter().enumerate() {
        if a.closed {
            let fwd = left_loop(&arcs[ai]);
            let rev: Vec<V2> = arcs[ai].iter().rev().copied().collect();
            curves.push(fwd);
            curves.push(left_loop(&rev));
            continue;
        }
        let (u, v) = a.ends.expect("open arc without ends");
        let pts = &arcs[ai];
        let n = pts.len();
        incident.entry(u).or_default().push((ai, true, unit(pts[0], pts[1])));
        incident.entry(v).or_default().push((ai, false, unit(pts[n - 1], pts[n - 2])));
    }

    // Strand leaving a vertex along an edge-end; it arrives at the far end.
    let strand = |ai: usize, from_start: bool| -> Vec<V2> {
        if from_start {
            left_strand(&arcs[ai])
        } else {
            let rev: Vec<V2> = arcs[ai].iter().rev().copied().collect();
            left_strand(&rev)
        }
    };

    // For an arrival along edge-end (arc, at_start) at a vertex: the departing edge-end and the path between.
    let mut turn: HashMap<(usize, bool), ((usize, bool), Vec<V2>)> = HashMap::new();
    for (vi, vx) in g.vertices.iter().enumerate() {
        let c = mul(SCALE, to_pq(vx.at));
        let ends = incident.get(&vi).cloned().unwrap_or_default();
        if ends.len() != vx.kind.degree() {
            return Err(DoublingError::BadVertex(vi));
        }
        match vx.kind {
            VertexKind::End(_) | VertexKind::Boundary => {
                let (ai, st, d) = ends[0];
                let plus = vx.kind == VertexKind::End(Sign::Plus);
                let tpl: &[V2] = if plus { &LOOP } else { &HAIRPIN };
                // Local frame: edge along -x from the tip.
                let up = mul(-1, rot(d));
                let path = tpl.iter().map(|&l| frame(c, up, l)).collect();
                turn.insert((ai, st), ((ai, st), path));
                if plus {
                    marks.push((to_xy(c), Origin::Loop));
                }
            }
            VertexKind::Y(sign) => {
                let dirs: Vec<V2> = ends.iter().map(|e| e.2).collect();
                let stem = (0..3)
                    .find(|&k| !dirs.contains(&mul(-1, dirs[k])))
                    .ok_or(DoublingError::BadVertex(vi))?;
                if dirs.iter().filter(|&&x| x == dirs[stem]).count() != 1 {
                    return Err(DoublingError::BadVertex(vi));
                }
                let s = dirs[stem];
                let find = |d: V2| ends.iter().find(|e| e.2 == d).map(|e| (e.0, e.1));
                // Local frame: stem along +y, arms along ∓x.
                let (stem_e, west_e, east_e) = (
                    find(s).unwrap(),
                    find(frame((0, 0), s, (-1, 0))).ok_or(DoublingError::BadVertex(vi))?,
                    find(frame((0, 0), s, (1, 0))).ok_or(DoublingError::BadVertex(vi))?,
                );
                let r = TRIM;
                let table: [((usize, bool), (usize, bool), Vec<V2>); 3] = match sign {
                    Sign::Minus => [
                        (stem_e, east_e, vec![(1, r), (1, 1), (r, 1)]),
                        (east_e, west_e, vec![(r, -1), (-r, -1)]),
                        (west_e, stem_e, vec![(-r, 1), (-1, 1), (-1, r)]),
                    ],
                    Sign::Plus => [
                        (stem_e, west_e, vec![(1, r), (1, -2), (-2, -2), (-2, -1), (-r, -1)]),
                        (west_e, east_e, vec![(-r, 1), (r, 1)]),
                        (east_e, stem_e, vec![(r, -1), (-1, -1), (-1, r)]),
                    ],
                };
                for (a, b, path) in table {
                    turn.insert(a, (b, path.into_iter().map(|l| frame(c, s, l)).collect()));
                }
                if sign == Sign::Plus {
                    marks.push((to_xy(c), Origin::VertexTurn));
                }
            }
        }
    }

    // Walk strands into closed curves.
    let mut done: HashMap<(usize, bool), bool> = HashMap::new();
    let mut keys: Vec<(usize, bool)> = Vec::new();
    for (ai, a) in g.arcs.iter().enumerate() {
        if !a.closed {
            keys.push((ai, true));
            keys.push((ai, false));
        }
    }
    for start in keys {
        if done.contains_key(&start) {
            continue;
        }
        let mut pts: Vec<V2> = Vec::new();
        let mut cur = start;
        loop {
            done.insert(cur, true);
            pts.extend(strand(cur.0, cur.1));
            // Arrive at the far end of this arc.
            let arrive = (cur.0, !cur.1);
            let (next, path) = &turn[&arrive];
            pts.extend(path.iter().copied());
            cur = *next;
            if cur == start {
                break;
            }
        }
        curves.push(pts);
    }
    let curves = curves
        .into_iter()
        .map(|c| simplify_polyline(&c.into_iter().map(to_xy).collect::<Vec<_>>(), true))
        .collect();
    Ok(OrientedDivide { curves, marks })
}

impl OrientedDivide {
    /// Double points between curve segments, each with its coordinates.
    pub fn double_points(&self) -> Vec<(i128, i128, i128)> {
        let mut segs = Vec::new();
        for c in &self.curves {
            let n = c.len();
            for k in 0..n {
                segs.push((c[k], c[(k + 1) % n]));
            }
        }
        let mut out = Vec::new();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if let Some(p) = proper_crossing(segs[i], segs[j]) {
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_slope_normalized(&self) -> bool {
        self.curves.iter().all(|c| {
            let n = c.len();
            (0..n).all(|k| {
                let (a, b) = (c[k], c[(k + 1) % n]);
                a != b && (a.0 - b.0).abs() == (a.1 - b.1).abs()
            })
        })
    }

    /// Twice the signed area enclosed by each curve; negative means clockwise.
    pub fn signed_areas(&self) -> Vec<i64> {
        self.curves
            .iter()
            .map(|c| {
                let n = c.len();
                (0..n)
                    .map(|k| c[k].0 * c[(k + 1) % n].1 - c[(k + 1) % n].0 * c[k].1)
                    .sum()
            })
            .collect()
    }
}

/// Classifies each double point by the construction it came from.
pub fn double_point_census(q: &OrientedDivide) -> Census {
    let mut c = Census::default();
    for (x, y, den) in q.double_points() {
        // Chebyshev distance in rotated coordinates.
        let near = |m: Pt, radius: i64| {
            let dx = x - m.0 as i128 * den;
            let dy = y - m.1 as i128 * den;
            let (dp, dq) = ((dx + dy).abs(), (dy - dx).abs());
            dp.max(dq) <= 2 * radius as i128 * den
        };
        let origin = q
            .marks
            .iter()
            .find(|&&(m, o)| near(m, if o == Origin::Sharp { 2 } else { TRIM + 3 }))
            .map(|&(_, o)| o)
            .unwrap_or(Origin::PreExisting);
        match origin {
            Origin::Sharp => c.sharp += 1,
            Origin::Loop => c.loops += 1,
            Origin::VertexTurn => c.vertex_turn += 1,
            Origin::PreExisting => c.pre_existing += 1,
        }
    }
    c
}
