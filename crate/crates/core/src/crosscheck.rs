//! Differential checks of the two pipelines, and a seeded fuzzer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bracket::jones;
use crate::braid::closure_diagram;
use crate::braiding::band_word;
use crate::diagram::simplify;
use crate::divide::{counts, validate, DivideCounts, GraphDivide, Kind, Sign};
use crate::hirasawa::{link_of_graph_divide, LinkError};
use crate::poly::LaurentPoly;
use crate::random::{random_divide, RandomSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiCheck {
    /// `χ(G) − 2δ`.
    pub formula: i64,
    /// Strands minus bands of the band word.
    pub n_minus_k: i64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckResult {
    pub name: String,
    pub jones_a: LaurentPoly,
    pub jones_b: LaurentPoly,
    pub equal: bool,
    pub counts: DivideCounts,
    pub bands: usize,
    pub chi_s: ChiCheck,
    /// `2n = v + 2m` and `k = 2δ + m + t3`.
    pub count_identities: bool,
}

impl CrosscheckResult {
    pub fn passed(&self) -> bool {
        self.equal && self.chi_s.agree && self.count_identities
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "jones_a": self.jones_a.to_json_map(),
            "jones_b": self.jones_b.to_json_map(),
            "equal": self.equal,
            "counts": self.counts,
            "bands": self.bands,
            "chi_s": self.chi_s,
            "count_identities": self.count_identities,
        })
    }
}

/// Runs both pipelines on `d` and compares them.
pub fn crosscheck(d: &GraphDivide) -> Result<CrosscheckResult, LinkError> {
    let c = counts(d)?;
    let jones_a = jones(&simplify(&link_of_graph_divide(d)?.diagram));
    let w = band_word(d)?;
    let jones_b = jones(&simplify(&closure_diagram(&w.flatten())));
    let k = w.bands.len();
    let formula = c.euler_g - 2 * c.delta as i64;
    let n_minus_k = w.strands as i64 - k as i64;
    Ok(CrosscheckResult {
        name: d.name.clone(),
        equal: jones_a == jones_b,
        jones_a,
        jones_b,
        count_identities: 2 * c.n == c.v + 2 * c.m && k == 2 * c.delta + c.m + c.t3,
        counts: c,
        bands: k,
        chi_s: ChiCheck { formula, n_minus_k, agree: formula == n_minus_k },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub case: usize,
    pub original: GraphDivide,
    pub shrunk: GraphDivide,
    pub result: CrosscheckResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub results: Vec<CrosscheckResult>,
    pub failures: Vec<FuzzFailure>,
}

/// The divide of fuzz case `case`; depends only on `(seed, case, max_connectors)`.
pub fn fuzz_case(seed: u64, case: usize, max_connectors: usize) -> GraphDivide {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    let spec = RandomSpec { max_chains: 6, max_connectors, ..RandomSpec::default() };
    let mut d = random_divide(&mut rng, &spec);
    d.name = format!("fuzz-{seed}-{case}");
    d
}

/// Crosschecks `count` random divides. Cases run in parallel; results are in case order.
pub fn fuzz(seed: u64, count: usize, max_connectors: usize) -> FuzzReport {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let mut slots: Vec<Option<(GraphDivide, CrosscheckResult)>> = vec![None; count];
    std::thread::scope(|s| {
        for (t, chunk) in slots.chunks_mut(count.div_ceil(threads).max(1)).enumerate() {
            let base = t * count.div_ceil(threads).max(1);
            s.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    let d = fuzz_case(seed, base + k, max_connectors);
                    let r = crosscheck(&d).expect("generated divides are valid");
                    *slot = Some((d, r));
                }
            });
        }
    });
    let mut report = FuzzReport { results: Vec::new(), failures: Vec::new() };
    for (case, slot) in slots.into_iter().enumerate() {
        let (d, r) = slot.expect("every case ran");
        if !r.passed() {
            let shrunk = shrink(&d);
            let result = crosscheck(&shrunk).expect("shrinking keeps divides valid");
            report.failures.push(FuzzFailure { case, original: d, shrunk, result });
        }
        report.results.push(r);
    }
    report
}

fn fails(d: &GraphDivide) -> bool {
    validate(d).ok && crosscheck(d).is_ok_and(|r| !r.passed())
}

/// Greedily drops crossings and turns `+` signs into `−` while the check still fails.
pub fn shrink(d: &GraphDivide) -> GraphDivide {
    let mut cur = d.clone();
    loop {
        let mut candidates = Vec::new();
        for (k, c) in cur.connectors.iter().enumerate() {
            match c.kind {
                Kind::Cross { .. } => {
                    let mut e = cur.clone();
                    e.connectors.remove(k);
                    candidates.push(e);
                }
                kind if kind.sign() == Some(Sign::Plus) => {
                    let mut e = cur.clone();
                    e.connectors[k].kind = kind.with_sign(Sign::Minus);
                    candidates.push(e);
                }
                _ => {}
            }
        }
        match candidates.into_iter().find(fails) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}
