use divide_core::doubling::double;
use divide_core::hirasawa::link_of_graph_divide;
use divide_core::layout::{embed, normalize_slopes};
use divide_core::{parse_divide, render_svg, BraidWord};

const ALPHA: &str = "chains 2\nend 1 bottom 0 -\nend 2 bottom 1 -\ncross 1 3\ncap 1 2 5\n";

#[test]
fn alpha_doubling_is_one_oriented_curve() {
    let d = parse_divide(ALPHA).unwrap();
    let q = double(&normalize_slopes(&embed(&d).unwrap())).unwrap();
    let svg = render_svg(&q);
    assert_eq!(svg.matches(r#"fill="none""#).count(), 1);
    assert_eq!(svg.matches(r#"fill="black"/>"#).count(), 1);
}

#[test]
fn diagram_breaks_under_strands() {
    let drawn = link_of_graph_divide(&parse_divide(ALPHA).unwrap()).unwrap();
    let svg = render_svg(&drawn);
    let crossings = drawn.diagram.crossing_count();
    assert!(crossings > 0);
    assert_eq!(svg.matches(r#"stroke="white""#).count(), crossings);
}

#[test]
fn braid_picture_has_a_gap_per_letter() {
    let svg = render_svg(&BraidWord::new(3, vec![1, -2, 1]).unwrap());
    // Per letter: one passive strand, two halves of the under strand, the over strand.
    assert_eq!(svg.matches("<polyline").count(), 3 * 4 + 2 * 3);
}
