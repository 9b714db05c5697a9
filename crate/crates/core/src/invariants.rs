//! Four-dimensional invariants of divide links and the combined report.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bracket::{determinant_from_jones, jones};
use crate::braiding::{band_word, braid_index_bound};
use crate::diagram::simplify;
use crate::divide::{branch_decomposition, counts, BranchKind, DivideError, GraphDivide};
use crate::hirasawa::{link_of_graph_divide, LinkError};
use crate::poly::LaurentPoly;

/// Exact value when every branch is an interval or a tree. Otherwise only the
/// lower bound is known; `δ` is not an upper bound once circles are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clasp {
    pub lower: i64,
    pub upper: Option<i64>,
    pub exact: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub jones: LaurentPoly,
    pub determinant: u64,
    pub components: usize,
    pub chi_s: i64,
    pub clasp: Clasp,
    pub braid_index_bound: usize,
}

/// `χ(G) − 2δ`, checked against `n − k` of the band word.
pub fn slice_euler_characteristic(d: &GraphDivide) -> Result<i64, DivideError> {
    let c = counts(d)?;
    let chi = c.euler_g - 2 * c.delta as i64;
    let w = band_word(d)?;
    assert_eq!(chi, w.strands as i64 - w.bands.len() as i64, "χ(G) − 2δ disagrees with n − k");
    Ok(chi)
}

/// Clasp number from the branch structure; `components` is the number of link components.
pub fn clasp_number_4d(d: &GraphDivide, components: usize) -> Result<Clasp, DivideError> {
    let delta = counts(d)?.delta as i64;
    let forest = branch_decomposition(d)?
        .iter()
        .all(|b| matches!(b.kind, BranchKind::Interval | BranchKind::Tree));
    if forest {
        return Ok(Clasp { lower: delta, upper: Some(delta), exact: Some(delta) });
    }
    let chi = slice_euler_characteristic(d)?;
    let gap = components as i64 - chi;
    // Ceiling division of a possibly negative gap.
    let lower = gap.div_euclid(2) + i64::from(gap.rem_euclid(2) != 0);
    Ok(Clasp { lower: lower.max(0), upper: None, exact: None })
}

/// All invariants, with the link taken from the diagram pipeline.
pub fn invariant_report(d: &GraphDivide) -> Result<InvariantReport, LinkError> {
    let drawn = link_of_graph_divide(d)?;
    let diagram = simplify(&drawn.diagram);
    let v = jones(&diagram);
    let components = diagram.component_count();
    Ok(InvariantReport {
        determinant: determinant_from_jones(&v),
        jones: v,
        components,
        chi_s: slice_euler_characteristic(d)?,
        clasp: clasp_number_4d(d, components)?,
        braid_index_bound: braid_index_bound(d)?,
    })
}

impl InvariantReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "jones": self.jones.to_json_map(),
            "determinant": self.determinant,
            "components": self.components,
            "chi_s": self.chi_s,
            "clasp": {
                "lower": self.clasp.lower,
                "upper": self.clasp.upper,
                "exact": self.clasp.exact,
            },
            "braid_index_bound": self.braid_index_bound,
        })
    }
}
