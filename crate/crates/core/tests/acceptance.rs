//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use divide_core::crosscheck::fuzz_case;
use divide_core::random::{random_divide, random_embedded_tree, RandomSpec};
use divide_core::{
    band_word, closure_diagram, counts, crosscheck, determinant, flip_all, flip_signs, fuzz, gibson_tree_to_graph_divide,
    invariant_report, jones, parse_divide, parse_tree_divide, positive_braid_to_divide, simplify,
    slice_euler_characteristic, BraidWord, GraphDivide, LaurentPoly,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Jones polynomial from `(exponent of t, coeff)` pairs.
fn v(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (2 * e, c)))
}

fn right_trefoil() -> LaurentPoly {
    v(&[(1, 1), (3, 1), (4, -1)])
}

/// The quasipositive chirality of 5_2.
fn qp_five_two() -> LaurentPoly {
    v(&[(1, 1), (2, -1), (3, 2), (4, -1), (5, 1), (6, -1)])
}

/// The quasipositive chirality of 8_21.
fn qp_eight_twenty_one() -> LaurentPoly {
    v(&[(1, 2), (2, -2), (3, 3), (4, -3), (5, 2), (6, -2), (7, 1)])
}

fn closure_jones(n: u32, w: &[i32]) -> LaurentPoly {
    jones(&simplify(&closure_diagram(&BraidWord::new(n, w.to_vec()).unwrap())))
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, format!("took {took:.2?}, limit {limit:?}"))
}

const LIMIT_UNKNOTS: Duration = Duration::from_secs(5);
const LIMIT_POSITIVE_BRAID: Duration = Duration::from_secs(30);
const LIMIT_FUZZ: Duration = Duration::from_secs(600);

fn unknot_suite() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..50 {
        let d = random_embedded_tree(&mut rng, 12);
        check(counts(&d).unwrap().delta == 0, format!("case {case} has double points"))?;
        let r = crosscheck(&d).map_err(|e| e.to_string())?;
        check(r.jones_a.is_one() && r.jones_b.is_one(), format!("case {case}: Jones is not 1\n{d}"))?;
        let det = determinant(&simplify(&divide_core::hirasawa::link_of_graph_divide(&d).unwrap().diagram));
        let w = band_word(&d).unwrap().flatten();
        let det_b = determinant(&simplify(&closure_diagram(&w)));
        check(det == 1 && det_b == 1, format!("case {case}: determinant {det}/{det_b}"))?;
    }
    within(start, LIMIT_UNKNOTS)?;
    Ok(format!("50 trees unknotted in {:.2?}", start.elapsed()))
}

const INWARD_TAILED: &str = "chains 4\ncup 1 2 0\ncup 3 4 1\ncross 2 3\nend 2 top 5 {a}\nend 3 top 6 {b}\ncap 1 4 8\n";
const ALPHA: &str = "chains 2\nend 1 bottom 0 {a}\nend 2 bottom 1 {b}\ncross 1 3\ncap 1 2 5\n";

fn signed(template: &str, a: char, b: char) -> GraphDivide {
    parse_divide(&template.replace("{a}", &a.to_string()).replace("{b}", &b.to_string())).unwrap()
}

fn one_double_point() -> Result<String, String> {
    let mut found = Vec::new();
    for (a, b) in [('-', '-'), ('+', '-')] {
        let r = crosscheck(&signed(INWARD_TAILED, a, b)).unwrap();
        check(r.equal, format!("pipelines disagree for signs {a}{b}"))?;
        found.push(r.jones_a);
    }
    let want = [qp_five_two(), right_trefoil()];
    check(found == want, format!("even/odd signs gave {found:?}"))?;
    let alpha: Vec<String> = ["--", "+-", "-+", "++"]
        .iter()
        .map(|s| {
            let mut c = s.chars();
            let r = crosscheck(&signed(ALPHA, c.next().unwrap(), c.next().unwrap())).unwrap();
            if r.equal && r.jones_a == right_trefoil() { "3_1" } else { "other" }.to_string()
        })
        .collect();
    Ok(format!("even signs: mirror 5_2, odd signs: right trefoil; boundary-tailed alpha gives {}", alpha.join("/")))
}

const EIGHT_TWENTY_ONE: &str = "chains 5\ncup 1 5 0\nycup 2 3 4 1 +\ncross 1 2\nend 4 top 3 -\nend 3 top 4 -\nend 2 top 5 +\ncap 1 5 6\n";

fn eight_twenty_one() -> Result<String, String> {
    let d = parse_divide(EIGHT_TWENTY_ONE).unwrap();
    let r = crosscheck(&d).unwrap();
    check(r.equal && r.jones_a == qp_eight_twenty_one(), format!("Jones {}", r.jones_a.display_half("t")))?;
    let inv = invariant_report(&d).unwrap();
    check(inv.determinant == 15, format!("determinant {}", inv.determinant))?;
    let w = band_word(&d).unwrap();
    check(w.strands == 5 && w.bands.len() == 6, format!("n={} k={}", w.strands, w.bands.len()))?;
    check(w.is_quasipositive_syntactic(), "a band is not quasipositive")?;
    check(r.chi_s.formula == -1 && r.chi_s.n_minus_k == -1, format!("chi_s {:?}", r.chi_s))?;
    check(inv.clasp.exact == Some(1), format!("clasp {:?}", inv.clasp))?;
    check(inv.braid_index_bound == 5, format!("braid index bound {}", inv.braid_index_bound))?;
    // The printed word for this example, on five strands.
    let word = [1, 4, -4, 3, 2, -3, 4, 1, 3, -4, -3, 2, 3, 4];
    check(closure_jones(5, &word) == qp_eight_twenty_one(), "the printed word does not close to 8_21")?;
    Ok("Jones, det 15, n=5, k=6, chi_s=-1, clasp 1, bound 5; printed word closes to the same knot".into())
}

fn positive_braids() -> Result<String, String> {
    let start = Instant::now();
    for (n, w) in [(2u32, vec![1, 1, 1]), (3, vec![1, 1, 2, 1, 2, 1, 1, 2, 2, 2])] {
        let b = BraidWord::new(n, w.clone()).unwrap();
        let d = positive_braid_to_divide(&b).unwrap();
        let c = counts(&d).unwrap();
        check(c.delta == 0, format!("{w:?}: delta {}", c.delta))?;
        let chi = slice_euler_characteristic(&d).unwrap();
        check(chi == n as i64 - w.len() as i64, format!("{w:?}: chi_s {chi}"))?;
        let jd = invariant_report(&d).unwrap().jones;
        check(jd == closure_jones(n, &w), format!("{w:?}: Jones {}", jd.display_half("t")))?;
    }
    within(start, LIMIT_POSITIVE_BRAID)?;
    Ok(format!("s1^3 and 10_139 reproduced, chi_s(10_139) = -7, in {:.2?}", start.elapsed()))
}

const FUZZ_SEED: u64 = 5;
const FUZZ_COUNT: usize = 240;

fn differential_fuzz() -> Result<String, String> {
    let start = Instant::now();
    let report = fuzz(FUZZ_SEED, FUZZ_COUNT, 8);
    check(report.failures.is_empty(), format!("{} failures, first:\n{}", report.failures.len(),
        report.failures.first().map_or(String::new(), |f| f.shrunk.to_string())))?;
    for r in &report.results {
        let c = &r.counts;
        check(r.jones_a == r.jones_b, format!("{}: Jones differ", r.name))?;
        check(2 * c.n == c.v + 2 * c.m, format!("{}: 2n != v + 2m", r.name))?;
        check(r.bands == 2 * c.delta + c.m + c.t3, format!("{}: k != 2delta + m + t3", r.name))?;
        check(c.n as i64 - r.bands as i64 == c.euler_g - 2 * c.delta as i64, format!("{}: n - k", r.name))?;
    }
    within(start, LIMIT_FUZZ)?;
    Ok(format!("{FUZZ_COUNT} divides agree in {:.2?}", start.elapsed()))
}

fn sign_flips() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let spec = RandomSpec { max_chains: 5, max_connectors: 8, ..RandomSpec::default() };
    for case in 0..60 {
        let d = random_divide(&mut rng, &spec);
        let base = invariant_report(&d).unwrap();
        let all = invariant_report(&flip_all(&d)).unwrap();
        check(all.jones == base.jones, format!("case {case}: flip-all changes Jones\n{d}"))?;
        check(all.chi_s == base.chi_s, format!("case {case}: flip-all changes chi_s"))?;
        for b in divide_core::branch_decomposition(&d).unwrap().iter().map(|b| b.id) {
            let one = invariant_report(&flip_signs(&d, &[b]).unwrap()).unwrap();
            check(one.determinant == base.determinant, format!("case {case}: flipping branch {b} changes det\n{d}"))?;
            check(one.chi_s == base.chi_s, format!("case {case}: flipping branch {b} changes chi_s"))?;
        }
    }
    Ok("60 divides: flip-all keeps Jones, single-branch flips keep det, chi_s fixed".into())
}

fn slice_implies_trivial() -> Result<String, String> {
    let mut seen = 0;
    for case in 0..FUZZ_COUNT {
        let d = fuzz_case(FUZZ_SEED, case, 8);
        let r = invariant_report(&d).unwrap();
        if r.components == 1 && r.chi_s == 1 {
            seen += 1;
            check(r.jones.is_one(), format!("{}: slice divide knot with Jones {}", d.name, r.jones.display_half("t")))?;
        }
    }
    check(seen > 0, "no fuzzed divide had r = 1 and chi_s = 1")?;
    let b = BraidWord::new(3, vec![1, 1, 1, 2, -1, -1, -1, 2]).unwrap();
    let diag = simplify(&closure_diagram(&b));
    let det = determinant(&diag);
    let root = (det as f64).sqrt().round() as u64;
    check(root * root == det, format!("determinant {det} is not a square"))?;
    check(!jones(&diag).is_one(), "quasipositive slice knot has trivial Jones")?;
    Ok(format!("{seen} slice divide knots are trivial; the slice braid closure has det {det} and nontrivial Jones"))
}

fn gibson() -> Result<String, String> {
    let t = parse_tree_divide("chains 3\nycup 1 2 3 0\nend 1 top 10\nend 2 top 20\nend 3 top 30\n").unwrap();
    let d = gibson_tree_to_graph_divide(&t, None).unwrap();
    check(
        d.connectors.iter().filter_map(|c| c.kind.sign()).all(|s| s == divide_core::Sign::Minus),
        "unmarked tree got a '+'",
    )?;
    let marked = "chains 4\nycup 1 2 3 0\nend 4 bottom 1\ncross 3 2\ncap 3 4 3\nend 2 top 4\nend 1 top 5\ndeg2 2 3\ndeg2 1 4\n";
    let t = parse_tree_divide(marked).unwrap();
    let base = invariant_report(&gibson_tree_to_graph_divide(&t, None).unwrap()).unwrap().determinant;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let seed = rand::Rng::gen::<u64>(&mut rng);
        let det = invariant_report(&gibson_tree_to_graph_divide(&t, Some(seed)).unwrap()).unwrap().determinant;
        check(det == base, format!("seed {seed}: det {det} != {base}"))?;
    }
    Ok(format!("unmarked tree is all '-'; det {base} for 10 seeds"))
}

type Criterion = (&'static str, fn() -> Result<String, String>);

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 8] = [
        ("unknot suite", unknot_suite),
        ("one double point", one_double_point),
        ("8_21 example", eight_twenty_one),
        ("positive braid converter", positive_braids),
        ("differential fuzz", differential_fuzz),
        ("sign flips", sign_flips),
        ("slice implies trivial", slice_implies_trivial),
        ("tree converter", gibson),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria passed");
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
