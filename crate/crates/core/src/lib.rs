//! Links of graph divides.
//!
//! Two independent routes from a combinatorial divide description to its
//! link: doubling followed by a diagram construction, and a quasipositive
//! band word read off a disk-and-band surface. Both feed one exact
//! Kauffman-bracket engine.

pub mod bracket;
pub mod converters;
pub mod crosscheck;
pub mod braid;
pub mod braiding;
pub mod diagram;
pub mod divide;
pub mod doubling;
pub mod hirasawa;
pub mod invariants;
pub mod layout;
pub mod poly;
pub mod random;
pub mod render;

pub use braid::{closure_diagram, Band, BandWord, BraidWord};
pub use braiding::{band_word, braid_index_bound};
pub use converters::{gibson_tree_to_graph_divide, parse_tree_divide, positive_braid_to_divide, ConvertError, TreeDivideInput};
pub use bracket::{determinant, jones, kauffman_bracket, kauffman_bracket_naive};
pub use divide::{
    branch_decomposition, counts, flip_all, flip_signs, half_turn, parse_divide, validate, Branch, BranchKind, Connector,
    DivideCounts, DivideError, GraphDivide, Kind, ParseError, Side, Sign, ValidationReport,
};
pub use crosscheck::{crosscheck, fuzz, CrosscheckResult, FuzzReport};
pub use diagram::{simplify, Crossing, LinkDiagram};
pub use invariants::{clasp_number_4d, invariant_report, slice_euler_characteristic, Clasp, InvariantReport};
pub use poly::LaurentPoly;
pub use render::{render_svg, RenderSvg};
