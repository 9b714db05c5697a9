//! Deterministic SVG pictures of immersions, oriented divides, diagrams and braids.

use std::fmt::Write as _;

use crate::braid::BraidWord;
use crate::diagram::{crossing_points, Pt};
use crate::divide::Sign;
use crate::doubling::OrientedDivide;
use crate::hirasawa::DrawnDiagram;
use crate::layout::{GridImmersion, VertexKind};

/// Anything with an SVG picture.
pub trait RenderSvg {
    fn render_svg(&self) -> String;
}

pub fn render_svg<T: RenderSvg + ?Sized>(obj: &T) -> String {
    obj.render_svg()
}

/// Page in plane coordinates, with `y` pointing up.
struct Page {
    min: (f64, f64),
    max: (f64, f64),
    unit: f64,
    body: String,
}

impl Page {
    fn new(points: impl Iterator<Item = (f64, f64)>, unit: f64) -> Self {
        let (mut min, mut max) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for (x, y) in points {
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if min.0 > max.0 {
            (min, max) = ((0.0, 0.0), (1.0, 1.0));
        }
        let pad = 2.0 * unit;
        Page { min: (min.0 - pad, min.1 - pad), max: (max.0 + pad, max.1 + pad), unit, body: String::new() }
    }

    fn xy(&self, p: (f64, f64)) -> String {
        format!("{:.2},{:.2}", p.0 - self.min.0, self.max.1 - p.1)
    }

    fn polyline(&mut self, pts: &[(f64, f64)], closed: bool, style: &str) {
        let tag = if closed { "polygon" } else { "polyline" };
        let coords: Vec<String> = pts.iter().map(|&p| self.xy(p)).collect();
        let _ = writeln!(self.body, r#"<{tag} points="{}" fill="none" {style}/>"#, coords.join(" "));
    }

    fn circle(&mut self, c: (f64, f64), r: f64, fill: &str) {
        let xy = self.xy(c);
        let (x, y) = xy.split_once(',').unwrap();
        let _ = writeln!(self.body, r#"<circle cx="{x}" cy="{y}" r="{r:.2}" fill="{fill}" stroke="black"/>"#);
    }

    fn arrow(&mut self, from: (f64, f64), to: (f64, f64)) {
        let (dx, dy) = (to.0 - from.0, to.1 - from.1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (ux, uy) = (dx / len * self.unit, dy / len * self.unit);
        let tip = ((from.0 + to.0) / 2.0 + ux / 2.0, (from.1 + to.1) / 2.0 + uy / 2.0);
        let back = (tip.0 - ux, tip.1 - uy);
        let pts = [tip, (back.0 - uy / 2.0, back.1 + ux / 2.0), (back.0 + uy / 2.0, back.1 - ux / 2.0)];
        let coords: Vec<String> = pts.iter().map(|&p| self.xy(p)).collect();
        let _ = writeln!(self.body, r#"<polygon points="{}" fill="black"/>"#, coords.join(" "));
    }

    fn finish(self) -> String {
        let (w, h) = (self.max.0 - self.min.0, self.max.1 - self.min.1);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn f(p: Pt) -> (f64, f64) {
    (p.0 as f64, p.1 as f64)
}

const STROKE: &str = r#"stroke="black" stroke-width="1""#;

impl RenderSvg for GridImmersion {
    fn render_svg(&self) -> String {
        let pts = self.arcs.iter().flat_map(|a| a.points.iter().copied().map(f));
        let mut page = Page::new(pts, 2.0);
        for a in &self.arcs {
            let pts: Vec<_> = a.points.iter().copied().map(f).collect();
            page.polyline(&pts, a.closed, STROKE);
        }
        for v in &self.vertices {
            let fill = match v.kind {
                VertexKind::End(Sign::Plus) | VertexKind::Y(Sign::Plus) => "black",
                VertexKind::End(Sign::Minus) | VertexKind::Y(Sign::Minus) => "white",
                VertexKind::Boundary => "gray",
            };
            let r = if matches!(v.kind, VertexKind::Y(_)) { 1.5 } else { 1.0 };
            page.circle(f(v.at), r, fill);
        }
        page.finish()
    }
}

impl RenderSvg for OrientedDivide {
    fn render_svg(&self) -> String {
        let mut page = Page::new(self.curves.iter().flatten().copied().map(f), 2.0);
        for c in &self.curves {
            let pts: Vec<_> = c.iter().copied().map(f).collect();
            page.polyline(&pts, true, STROKE);
            if pts.len() >= 2 {
                page.arrow(pts[0], pts[1]);
            }
        }
        page.finish()
    }
}

impl RenderSvg for DrawnDiagram {
    fn render_svg(&self) -> String {
        let unit = self.curves.iter().flatten().map(|p| p.0.abs().max(p.1.abs())).max().unwrap_or(1) as f64 / 200.0;
        let mut page = Page::new(self.curves.iter().flatten().copied().map(f), unit.max(1.0));
        for c in &self.curves {
            let pts: Vec<_> = c.iter().copied().map(f).collect();
            page.polyline(&pts, true, STROKE);
        }
        // Break the under strand: white halo along the over strand, then the over strand again.
        let gap = 1.5 * page.unit;
        for (a, b, at) in crossing_points(&self.curves).unwrap_or_default() {
            let over = if self.layers[a.curve][a.seg] < self.layers[b.curve][b.seg] { a } else { b };
            let c = &self.curves[over.curve];
            let (p, q) = (f(c[over.seg]), f(c[(over.seg + 1) % c.len()]));
            let len = ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt().max(1e-9);
            let (ux, uy) = ((q.0 - p.0) / len * gap, (q.1 - p.1) / len * gap);
            let piece = [(at.0 - ux, at.1 - uy), (at.0 + ux, at.1 + uy)];
            page.polyline(&piece, false, &format!(r#"stroke="white" stroke-width="{:.2}""#, page.unit * 1.5));
            page.polyline(&piece, false, STROKE);
        }
        page.finish()
    }
}

impl RenderSvg for BraidWord {
    /// Strands run upwards; each letter is one row with a gap in the under strand.
    fn render_svg(&self) -> String {
        let (n, rows) = (self.strands as usize, self.letters.len());
        let corners = [(1.0, 0.0), (n as f64, (rows + 1) as f64)];
        let mut page = Page::new(corners.into_iter().map(|(x, y)| (x * 10.0, y * 10.0)), 5.0);
        for (row, &l) in self.letters.iter().enumerate() {
            let (y0, y1) = (row as f64 * 10.0 + 5.0, row as f64 * 10.0 + 15.0);
            let i = l.unsigned_abs() as usize;
            for s in (1..=n).filter(|&s| s != i && s != i + 1) {
                page.polyline(&[(s as f64 * 10.0, y0), (s as f64 * 10.0, y1)], false, STROKE);
            }
            let (a, b) = (i as f64 * 10.0, (i + 1) as f64 * 10.0);
            // σ_i: the strand rising to the right passes over.
            let (over, under) = if l > 0 { ([(a, y0), (b, y1)], [(b, y0), (a, y1)]) } else { ([(b, y0), (a, y1)], [(a, y0), (b, y1)]) };
            let mid = ((a + b) / 2.0, (y0 + y1) / 2.0);
            let cut = |p: (f64, f64), t: f64| (p.0 + (mid.0 - p.0) * t, p.1 + (mid.1 - p.1) * t);
            page.polyline(&[under[0], cut(under[0], 0.7)], false, STROKE);
            page.polyline(&[under[1], cut(under[1], 0.7)], false, STROKE);
            page.polyline(&over, false, STROKE);
        }
        for s in 1..=n {
            let x = s as f64 * 10.0;
            page.polyline(&[(x, 0.0), (x, 5.0)], false, STROKE);
            page.polyline(&[(x, rows as f64 * 10.0 + 5.0), (x, rows as f64 * 10.0 + 10.0)], false, STROKE);
        }
        page.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;
    use crate::layout::embed;

    #[test]
    fn unknot_immersion_picture() {
        let d = parse_divide("chains 1\nend 1 bottom 0 -\nend 1 top 1 -\n").unwrap();
        let svg = render_svg(&embed(&d).unwrap());
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    }
}
