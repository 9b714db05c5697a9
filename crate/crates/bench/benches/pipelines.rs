use criterion::{criterion_group, criterion_main, Criterion};
use divide_core::hirasawa::link_of_graph_divide;
use divide_core::{
    band_word, closure_diagram, crosscheck, fuzz, jones, kauffman_bracket_naive, parse_divide,
    positive_braid_to_divide, simplify, BraidWord,
};

const EIGHT_TWENTY_ONE: &str =
    "chains 5\ncup 1 5 0\nycup 2 3 4 1 +\ncross 1 2\nend 4 top 3 -\nend 3 top 4 -\nend 2 top 5 +\ncap 1 5 6\n";

fn bracket(c: &mut Criterion) {
    let w = BraidWord::new(3, vec![1, 1, 2, 1, 2, 1, 1, 2, 2, 2]).unwrap();
    let d = closure_diagram(&w);
    c.bench_function("jones_10_139_closure", |b| b.iter(|| jones(&d)));
    c.bench_function("naive_bracket_10_139_closure", |b| b.iter(|| kauffman_bracket_naive(&d)));
}

fn pipelines(c: &mut Criterion) {
    let d = parse_divide(EIGHT_TWENTY_ONE).unwrap();
    c.bench_function("pipeline_a_8_21", |b| {
        b.iter(|| jones(&simplify(&link_of_graph_divide(&d).unwrap().diagram)))
    });
    c.bench_function("pipeline_b_8_21", |b| {
        b.iter(|| jones(&simplify(&closure_diagram(&band_word(&d).unwrap().flatten()))))
    });
    c.bench_function("crosscheck_8_21", |b| b.iter(|| crosscheck(&d).unwrap()));
}

fn simplify_large(c: &mut Criterion) {
    let w = BraidWord::new(3, vec![1, 1, 2, 1, 2, 1, 1, 2, 2, 2]).unwrap();
    let raw = link_of_graph_divide(&positive_braid_to_divide(&w).unwrap()).unwrap().diagram;
    c.bench_function("simplify_10_139_divide_diagram", |b| b.iter(|| simplify(&raw)));
}

fn fuzzing(c: &mut Criterion) {
    let mut g = c.benchmark_group("fuzz");
    g.sample_size(10);
    g.bench_function("fuzz_50_size_8", |b| b.iter(|| fuzz(1, 50, 8)));
    g.finish();
}

criterion_group!(benches, bracket, pipelines, simplify_large, fuzzing);
criterion_main!(benches);
