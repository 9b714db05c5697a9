use divide_core::doubling::double;
use divide_core::hirasawa::link_of_graph_divide;
use divide_core::layout::{embed, normalize_slopes};
use divide_core::random::{random_divide, RandomSpec};
use divide_core::{
    branch_decomposition, counts, crosscheck, determinant, flip_all, flip_signs, half_turn, invariant_report, jones,
    parse_divide, render_svg, simplify, slice_euler_characteristic, BranchKind, GraphDivide,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn divide(seed: u64, max_connectors: usize) -> GraphDivide {
    let spec = RandomSpec { max_chains: 5, max_connectors, ..RandomSpec::default() };
    random_divide(&mut ChaCha8Rng::seed_from_u64(seed), &spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let d = divide(seed, 10);
        prop_assert_eq!(parse_divide(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn count_identities(seed in any::<u64>()) {
        let d = divide(seed, 10);
        let c = counts(&d).unwrap();
        prop_assert_eq!(2 * c.n, c.v + 2 * c.m);
        let bs = branch_decomposition(&d).unwrap();
        prop_assert_eq!(c.euler_g, bs.iter().map(|b| b.euler()).sum::<i64>());
        prop_assert_eq!(c.circles, bs.iter().filter(|b| b.kind == BranchKind::Circle).count());
    }

    #[test]
    fn flips_are_involutions(seed in any::<u64>()) {
        let d = divide(seed, 10);
        prop_assert_eq!(flip_all(&flip_all(&d)), d.clone());
        let c = counts(&d).unwrap();
        for b in branch_decomposition(&d).unwrap() {
            let once = flip_signs(&d, &[b.id]).unwrap();
            prop_assert_eq!(counts(&once).unwrap(), c.clone());
            prop_assert_eq!(flip_signs(&once, &[b.id]).unwrap(), d.clone());
        }
    }

    #[test]
    fn embedding_matches_counts(seed in any::<u64>()) {
        let d = divide(seed, 10);
        let c = counts(&d).unwrap();
        let g = embed(&d).unwrap();
        prop_assert_eq!(g.count_double_points(), c.delta);
        prop_assert_eq!(g.vertices.len(), c.v);
        // Image graph with double points as degree-4 vertices: V − E = χ(G) − δ.
        let open = g.arcs.iter().filter(|a| !a.closed).count() as i64;
        prop_assert_eq!(g.vertices.len() as i64 - open - c.delta as i64, c.euler_g - c.delta as i64);
    }

    #[test]
    fn slope_normalization_keeps_structure(seed in any::<u64>()) {
        let d = divide(seed, 10);
        let c = counts(&d).unwrap();
        let g = embed(&d).unwrap();
        let s = normalize_slopes(&g);
        prop_assert!(s.is_slope_normalized());
        prop_assert_eq!(s.count_double_points(), c.delta);
        prop_assert_eq!(s.vertices.len(), g.vertices.len());
        prop_assert_eq!(s.arcs.len(), g.arcs.len());
        let extrema = s.vertical_extrema();
        prop_assert!(extrema >= c.m && (extrema - c.m).is_multiple_of(2), "{} extrema for m = {}", extrema, c.m);
    }

    #[test]
    fn doubling_curve_count(seed in any::<u64>()) {
        let d = divide(seed, 10);
        let bs = branch_decomposition(&d).unwrap();
        prop_assume!(bs.iter().all(|b| b.kind != BranchKind::GraphWithCycle));
        let c = counts(&d).unwrap();
        let q = double(&normalize_slopes(&embed(&d).unwrap())).unwrap();
        prop_assert_eq!(q.curves.len(), c.branches + c.circles);
    }

    #[test]
    fn rendering_is_deterministic(seed in any::<u64>()) {
        let d = divide(seed, 8);
        let g = embed(&d).unwrap();
        prop_assert_eq!(render_svg(&g), render_svg(&embed(&d).unwrap()));
        let drawn = link_of_graph_divide(&d).unwrap();
        prop_assert_eq!(render_svg(&drawn), render_svg(&link_of_graph_divide(&d).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipelines_agree(seed in any::<u64>()) {
        let r = crosscheck(&divide(seed, 8)).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn jones_survives_simplify(seed in any::<u64>()) {
        let raw = link_of_graph_divide(&divide(seed, 6)).unwrap().diagram;
        let reduced = simplify(&raw);
        prop_assert!(reduced.crossing_count() <= raw.crossing_count());
        prop_assert_eq!(jones(&reduced), jones(&raw));
    }

    #[test]
    fn sign_flips(seed in any::<u64>()) {
        let d = divide(seed, 8);
        let base = invariant_report(&d).unwrap();
        prop_assert_eq!(invariant_report(&flip_all(&d)).unwrap().jones, base.jones.clone());
        for b in branch_decomposition(&d).unwrap() {
            let f = flip_signs(&d, &[b.id]).unwrap();
            let diag = simplify(&link_of_graph_divide(&f).unwrap().diagram);
            prop_assert_eq!(determinant(&diag), base.determinant);
            prop_assert_eq!(slice_euler_characteristic(&f).unwrap(), base.chi_s);
        }
    }

    #[test]
    fn half_turn_keeps_the_link(seed in any::<u64>()) {
        let d = divide(seed, 8);
        let t = half_turn(&d);
        prop_assert_eq!(counts(&t).unwrap(), counts(&d).unwrap());
        prop_assert_eq!(invariant_report(&t).unwrap().jones, invariant_report(&d).unwrap().jones);
    }

    #[test]
    fn slice_divide_knots_are_trivial(seed in any::<u64>()) {
        let r = invariant_report(&divide(seed, 8)).unwrap();
        if r.components == 1 && r.chi_s == 1 {
            prop_assert!(r.jones.is_one());
            prop_assert_eq!(r.determinant, 1);
        }
    }
}
