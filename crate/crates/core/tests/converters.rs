use divide_core::{
    closure_diagram, counts, gibson_tree_to_graph_divide, invariant_report, jones, parse_tree_divide,
    positive_braid_to_divide, simplify, slice_euler_characteristic, validate, BraidWord, ConvertError, Kind, Sign,
};

fn signs(d: &divide_core::GraphDivide) -> Vec<Sign> {
    d.connectors.iter().filter_map(|c| c.kind.sign()).collect()
}

#[test]
fn single_letter_gives_unknot() {
    let w = BraidWord::new(2, vec![1]).unwrap();
    let d = positive_braid_to_divide(&w).unwrap();
    assert!(validate(&d).ok);
    let c = counts(&d).unwrap();
    assert_eq!((c.delta, c.euler_g), (0, 1));
    assert!(invariant_report(&d).unwrap().jones.is_one());
}

#[test]
fn positive_words_match_their_closures() {
    for (n, w) in [(2, vec![1, 1]), (2, vec![1, 1, 1]), (3, vec![1, 2, 1, 2]), (4, vec![3, 3, 2, 1, 1, 2, 3])] {
        let b = BraidWord::new(n, w.clone()).unwrap();
        let d = positive_braid_to_divide(&b).unwrap();
        assert!(validate(&d).ok, "{w:?}");
        assert_eq!(counts(&d).unwrap().delta, 0);
        assert_eq!(slice_euler_characteristic(&d).unwrap(), n as i64 - w.len() as i64);
        assert_eq!(invariant_report(&d).unwrap().jones, jones(&simplify(&closure_diagram(&b))), "{w:?}");
    }
}

#[test]
fn negative_letters_are_rejected() {
    let b = BraidWord::new(3, vec![1, -2]).unwrap();
    assert_eq!(positive_braid_to_divide(&b), Err(ConvertError::NotPositive(-2)));
}

const Y_TREE: &str = "chains 3\nycup 1 2 3 0\nend 1 top 10\nend 2 top 20\nend 3 top 30\n";

#[test]
fn plain_tree_gets_minus_signs() {
    let t = parse_tree_divide(Y_TREE).unwrap();
    let d = gibson_tree_to_graph_divide(&t, None).unwrap();
    assert!(validate(&d).ok);
    assert!(signs(&d).iter().all(|&s| s == Sign::Minus));
}

#[test]
fn endpoint_absorbs_adjacent_mark() {
    let t = parse_tree_divide(&format!("{Y_TREE}deg2 2 15\n")).unwrap();
    let d = gibson_tree_to_graph_divide(&t, None).unwrap();
    let plus: Vec<_> = d.connectors.iter().filter(|c| c.kind.sign() == Some(Sign::Plus)).collect();
    assert_eq!(plus.len(), 1);
    assert!(matches!(plus[0].kind, Kind::End { i: 2, .. }));
}

#[test]
fn vertex_with_three_marked_edges_turns_positive() {
    let t = parse_tree_divide(&format!("{Y_TREE}deg2 1 5\ndeg2 2 5\ndeg2 3 5\n")).unwrap();
    let d = gibson_tree_to_graph_divide(&t, None).unwrap();
    for c in &d.connectors {
        let want = if matches!(c.kind, Kind::YCup { .. }) { Sign::Plus } else { Sign::Minus };
        assert_eq!(c.kind.sign(), Some(want));
    }
}

#[test]
fn isolated_vertex_is_an_unknotted_interval() {
    let t = parse_tree_divide("chains 0\nisolated 3\n").unwrap();
    let d = gibson_tree_to_graph_divide(&t, Some(4)).unwrap();
    assert_eq!(d.n_chains, 1);
    assert!(invariant_report(&d).unwrap().jones.is_one());
}

#[test]
fn cycles_and_boundary_are_rejected() {
    let circle = parse_tree_divide("chains 2\ncup 1 2 0\ncap 1 2 1\n").unwrap();
    assert_eq!(gibson_tree_to_graph_divide(&circle, None), Err(ConvertError::Cycle(1)));
    let arc = parse_tree_divide("chains 1\nboundary 1 bottom 0\nend 1 top 1\n").unwrap();
    assert_eq!(gibson_tree_to_graph_divide(&arc, None), Err(ConvertError::TouchesBoundary));
}

#[test]
fn determinant_ignores_orientation_seed() {
    let src = "chains 4\nycup 1 2 3 0\nend 4 bottom 1\ncross 3 2\ncap 3 4 3\nend 2 top 4\nend 1 top 5\ndeg2 2 3\n";
    let t = parse_tree_divide(src).unwrap();
    let base = invariant_report(&gibson_tree_to_graph_divide(&t, None).unwrap()).unwrap().determinant;
    for o in 0..10 {
        let d = gibson_tree_to_graph_divide(&t, Some(o)).unwrap();
        assert_eq!(invariant_report(&d).unwrap().determinant, base, "seed {o}");
    }
}
