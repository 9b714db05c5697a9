//! Link diagrams of oriented divides, and the link of a graph divide.
//!
//! A point of the divide with unit tangent at angle `θ` lies on the page
//! `θ` of an open book whose binding sits over the disk boundary. Crossings
//! compare angles, and each maximum or minimum passed with tangent `+x1`
//! is pulled out through the binding as a vertical spike.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{from_polylines, DiagramError, LinkDiagram, Pt, SegRef};
use crate::divide::{DivideError, GraphDivide};
use crate::doubling::{double, DoublingError, OrientedDivide};
use crate::layout::{embed, normalize_slopes};

/// A diagram together with the plane curves it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawnDiagram {
    pub diagram: LinkDiagram,
    pub curves: Vec<Vec<Pt>>,
    /// Page index of every segment, in eighths of a turn.
    pub layers: Vec<Vec<u8>>,
}

#[derive(Debug, Error)]
pub enum LinkError {
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error(transparent)]
    Doubling(#[from] DoublingError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("curve {0} is not in slope-±1 position")]
    NotNormal(usize),
}

fn class(d: (i64, i64)) -> Option<u8> {
    match (d.0.signum(), d.1.signum(), d.0.abs() == d.1.abs()) {
        (1, 1, true) => Some(1),
        (-1, 1, true) => Some(3),
        (-1, -1, true) => Some(5),
        (1, -1, true) => Some(7),
        _ => None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Turn {
    Max,
    Min,
}

/// Builds the oriented link diagram of `L_ori(q)`.
pub fn diagram_of_oriented_divide(q: &OrientedDivide) -> Result<DrawnDiagram, LinkError> {
    let mut spikes: Vec<(usize, usize, Turn)> = Vec::new();
    for (ci, c) in q.curves.iter().enumerate() {
        let n = c.len();
        for k in 0..n {
            let (a, b, e) = (c[(k + n - 1) % n], c[k], c[(k + 1) % n]);
            let cin = class((b.0 - a.0, b.1 - a.1)).ok_or(LinkError::NotNormal(ci))?;
            let cout = class((e.0 - b.0, e.1 - b.1)).ok_or(LinkError::NotNormal(ci))?;
            match (cin, cout) {
                (1, 7) => spikes.push((ci, k, Turn::Max)),
                (7, 1) => spikes.push((ci, k, Turn::Min)),
                _ => {}
            }
        }
    }
    // Spikes sharing a column nest; the outer ones get wider offsets.
    let mut column: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (si, &(ci, k, _)) in spikes.iter().enumerate() {
        column.entry(q.curves[ci][k].0).or_default().push(si);
    }
    let per_col = column.values().map(Vec::len).max().unwrap_or(0) as i64;
    let scale = 8 * per_col + 8;
    let mut offset = vec![0i64; spikes.len()];
    for members in column.values() {
        let y = |si: usize| q.curves[spikes[si].0][spikes[si].1].1;
        let mut maxes: Vec<usize> = members.iter().copied().filter(|&s| spikes[s].2 == Turn::Max).collect();
        let mut mins: Vec<usize> = members.iter().copied().filter(|&s| spikes[s].2 == Turn::Min).collect();
        maxes.sort_by_key(|&s| std::cmp::Reverse(y(s)));
        mins.sort_by_key(|&s| y(s));
        for (k, s) in maxes.into_iter().enumerate() {
            offset[s] = 4 * k as i64 + 1;
        }
        for (k, s) in mins.into_iter().enumerate() {
            offset[s] = 4 * k as i64 + 3;
        }
    }
    let ys = q.curves.iter().flatten().map(|p| p.1);
    let (ymin, ymax) = (ys.clone().min().unwrap_or(0) * scale, ys.max().unwrap_or(0) * scale);
    let mut at: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (si, &(ci, k, _)) in spikes.iter().enumerate() {
        at.insert((ci, k), si);
    }

    let mut curves = Vec::new();
    let mut layers = Vec::new();
    for (ci, c) in q.curves.iter().enumerate() {
        let n = c.len();
        // (point, layer of the segment leaving it)
        let mut pts: Vec<(Pt, u8)> = Vec::new();
        for k in 0..n {
            let p = (c[k].0 * scale, c[k].1 * scale);
            let next = c[(k + 1) % n];
            let out_class = class((next.0 - c[k].0, next.1 - c[k].1)).unwrap();
            match at.get(&(ci, k)) {
                None => pts.push((p, out_class)),
                Some(&si) => {
                    let o = offset[si];
                    match spikes[si].2 {
                        Turn::Max => {
                            let top = ymax + scale + o;
                            pts.push(((p.0 - o, p.1 - o), 0));
                            pts.push(((p.0 - o, top), 0));
                            pts.push(((p.0 + o, top), 8));
                            pts.push(((p.0 + o, p.1 - o), out_class));
                        }
                        Turn::Min => {
                            let bottom = ymin - scale - o;
                            pts.push(((p.0 - o, p.1 + o), 8));
                            pts.push(((p.0 - o, bottom), 8));
                            pts.push(((p.0 + o, bottom), 0));
                            pts.push(((p.0 + o, p.1 + o), out_class));
                        }
                    }
                }
            }
        }
        curves.push(pts.iter().map(|x| x.0).collect::<Vec<_>>());
        layers.push(pts.iter().map(|x| x.1).collect::<Vec<_>>());
    }
    let over = |a: SegRef, b: SegRef| layers[a.curve][a.seg] < layers[b.curve][b.seg];
    let diagram = from_polylines(&curves, over)?;
    Ok(DrawnDiagram { diagram, curves, layers })
}

/// `embed → normalize_slopes → double → diagram_of_oriented_divide`.
pub fn link_of_graph_divide(d: &GraphDivide) -> Result<DrawnDiagram, LinkError> {
    let g = normalize_slopes(&embed(d)?);
    let q = double(&g)?;
    diagram_of_oriented_divide(&q)
}

pub fn component_count(d: &LinkDiagram) -> usize {
    d.component_count()
}

pub fn writhe(d: &LinkDiagram) -> i64 {
    d.writhe()
}
