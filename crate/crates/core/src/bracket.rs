//! Kauffman bracket state sums.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::LinkDiagram;
use crate::poly::LaurentPoly;

/// Dense polynomial in `A` used inside the sweep.
#[derive(Clone, Debug, Default)]
struct Dense {
    lo: i32,
    c: Vec<i128>,
}

impl Dense {
    fn one() -> Self {
        Dense { lo: 0, c: vec![1] }
    }

    /// `self += other * A^shift`
    fn add_shifted(&mut self, other: &Dense, shift: i32) {
        if other.c.is_empty() {
            return;
        }
        let olo = other.lo + shift;
        let ohi = olo + other.c.len() as i32;
        if self.c.is_empty() {
            self.lo = olo;
            self.c = other.c.clone();
            return;
        }
        let lo = self.lo.min(olo);
        let hi = (self.lo + self.c.len() as i32).max(ohi);
        if lo < self.lo || hi > self.lo + self.c.len() as i32 {
            let mut c = vec![0i128; (hi - lo) as usize];
            let off = (self.lo - lo) as usize;
            c[off..off + self.c.len()].copy_from_slice(&self.c);
            self.c = c;
            self.lo = lo;
        }
        let off = (olo - self.lo) as usize;
        for (k, v) in other.c.iter().enumerate() {
            self.c[off + k] = self.c[off + k].checked_add(*v).expect("bracket coefficient overflow");
        }
    }

    /// Multiplies by `d = -A^2 - A^{-2}`.
    fn times_loop(&self) -> Dense {
        let mut out = Dense::default();
        let neg = Dense {
            lo: self.lo,
            c: self.c.iter().map(|v| -v).collect(),
        };
        out.add_shifted(&neg, 2);
        out.add_shifted(&neg, -2);
        out
    }

    fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.c
                .iter()
                .enumerate()
                .map(|(k, &v)| (self.lo + k as i32, i64::try_from(v).expect("coefficient exceeds i64"))),
        )
    }
}

/// Divides by `d = -A^2 - A^{-2}` exactly.
fn divide_by_loop(p: &LaurentPoly) -> LaurentPoly {
    // p = -(A^4 + 1) A^{-2} q; divide by the monic A^4 + 1 from the top.
    let mut rem = p.shift(2);
    let floor = rem.min_exp().unwrap_or(0);
    let mut q = LaurentPoly::zero();
    while let Some(top) = rem.max_exp() {
        assert!(top >= floor + 4, "bracket not divisible by the loop value");
        let c = rem.coeff(top);
        let e = top - 4;
        q.add_term(e, c);
        rem.add_term(top, -c);
        rem.add_term(e, -c);
    }
    -&q
}

/// Kauffman bracket normalized so the crossingless unknot is 1.
///
/// Crossings are absorbed one at a time, each time choosing the crossing
/// with the most already-open labels. A state is a partner map on the
/// open labels.
pub fn kauffman_bracket(diag: &LinkDiagram) -> LaurentPoly {
    let xs = &diag.crossings;
    if xs.is_empty() {
        return loop_power(diag.free_loops).unwrap_or_else(LaurentPoly::one);
    }
    let order = sweep_order(diag);
    let mut states: HashMap<Vec<u32>, Dense> = HashMap::new();
    states.insert(Vec::new(), Dense::one());
    for ci in order {
        let p = xs[ci].pd;
        let mut next: HashMap<Vec<u32>, Dense> = HashMap::with_capacity(states.len() * 2);
        for (key, poly) in &states {
            for (chords, weight) in [([(p[0], p[1]), (p[2], p[3])], 1), ([(p[0], p[3]), (p[1], p[2])], -1)] {
                let mut partner: HashMap<u32, u32> = key.chunks(2).flat_map(|c| [(c[0], c[1]), (c[1], c[0])]).collect();
                let mut loops = 0;
                for (x, y) in chords {
                    if x == y {
                        loops += 1;
                        continue;
                    }
                    let xe = partner.remove(&x);
                    let ye = partner.remove(&y);
                    let xe_end = match xe {
                        Some(v) => {
                            partner.remove(&v);
                            v
                        }
                        None => x,
                    };
                    let ye_end = match ye {
                        Some(v) => {
                            if v != x {
                                partner.remove(&v);
                            }
                            v
                        }
                        None => y,
                    };
                    if xe == Some(y) {
                        loops += 1;
                        continue;
                    }
                    partner.insert(xe_end, ye_end);
                    partner.insert(ye_end, xe_end);
                }
                let mut pairs: Vec<(u32, u32)> = partner.into_iter().filter(|(a, b)| a < b).collect();
                pairs.sort_unstable();
                let k: Vec<u32> = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
                let mut term = poly.clone();
                for _ in 0..loops {
                    term = term.times_loop();
                }
                next.entry(k).or_default().add_shifted(&term, weight);
            }
        }
        states = next;
    }
    assert_eq!(states.len(), 1, "sweep left open labels");
    let total = states.remove(&Vec::new()).expect("sweep left open labels").to_poly();
    let mut total = total;
    for _ in 0..diag.free_loops {
        total = &total * &loop_value();
    }
    divide_by_loop(&total)
}

fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)])
}

fn loop_power(loops: u32) -> Option<LaurentPoly> {
    if loops == 0 {
        return None;
    }
    let mut p = LaurentPoly::one();
    for _ in 1..loops {
        p = &p * &loop_value();
    }
    Some(p)
}

/// Elimination order: greedy on shared labels, restarted from a few seeded
/// tie-breaks, keeping the order with the narrowest frontier.
fn sweep_order(diag: &LinkDiagram) -> Vec<usize> {
    let n = diag.crossings.len();
    let mut where_: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, x) in diag.crossings.iter().enumerate() {
        for l in x.pd {
            where_.entry(l).or_default().push(i);
        }
    }
    let restarts = (20_000_000 / (n * n).max(1)).clamp(1, 64) as u64;
    let mut best = greedy_order(diag, &where_, None);
    let mut best_width = frontier_width(diag, &best);
    for seed in 0..restarts {
        let order = greedy_order(diag, &where_, Some(seed));
        let w = frontier_width(diag, &order);
        if w < best_width {
            best = order;
            best_width = w;
        }
    }
    best
}

fn greedy_order(diag: &LinkDiagram, where_: &HashMap<u32, Vec<usize>>, seed: Option<u64>) -> Vec<usize> {
    let xs = &diag.crossings;
    let (noise, first) = match seed {
        None => ((0..xs.len() as u64).rev().collect::<Vec<_>>(), 0),
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            ((0..xs.len()).map(|_| rng.gen()).collect(), rng.gen_range(0..xs.len()))
        }
    };
    let mut done = vec![false; xs.len()];
    let mut open_count = vec![0i32; xs.len()];
    let mut order = Vec::with_capacity(xs.len());
    for step in 0..xs.len() {
        let pick = if step == 0 {
            first
        } else {
            (0..xs.len())
                .filter(|&i| !done[i])
                .max_by_key(|&i| (open_count[i], noise[i]))
                .unwrap()
        };
        done[pick] = true;
        order.push(pick);
        for l in xs[pick].pd {
            for &j in &where_[&l] {
                if !done[j] {
                    open_count[j] += 1;
                }
            }
        }
    }
    order
}

fn frontier_width(diag: &LinkDiagram, order: &[usize]) -> usize {
    let mut open = HashSet::new();
    let mut widest = 0;
    for &i in order {
        for l in diag.crossings[i].pd {
            if !open.remove(&l) {
                open.insert(l);
            }
        }
        widest = widest.max(open.len());
    }
    widest
}

/// Direct enumeration over all `2^c` states. Only for small diagrams.
pub fn kauffman_bracket_naive(diag: &LinkDiagram) -> LaurentPoly {
    let xs = &diag.crossings;
    assert!(xs.len() <= 20, "naive bracket limited to 20 crossings");
    let mut labels: Vec<u32> = xs.iter().flat_map(|x| x.pd).collect();
    labels.sort_unstable();
    labels.dedup();
    let idx: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut total = LaurentPoly::zero();
    for mask in 0u64..(1u64 << xs.len()) {
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut a_count = 0i32;
        for (i, x) in xs.iter().enumerate() {
            let p = x.pd;
            let chords = if mask >> i & 1 == 0 {
                a_count += 1;
                [(p[0], p[1]), (p[2], p[3])]
            } else {
                a_count -= 1;
                [(p[0], p[3]), (p[1], p[2])]
            };
            for (u, v) in chords {
                let (ru, rv) = (find(&mut parent, idx[&u]), find(&mut parent, idx[&v]));
                parent[ru] = rv;
            }
        }
        let loops = (0..labels.len()).filter(|&i| find(&mut parent, i) == i).count() as u32
            + diag.free_loops;
        let term = loop_power(loops).unwrap().shift(a_count);
        total = &total + &term;
    }
    if xs.is_empty() {
        return loop_power(diag.free_loops).unwrap_or_else(LaurentPoly::one);
    }
    total
}

/// Jones polynomial with exponents in units of `t^{1/2}`.
pub fn jones_from_bracket(bracket: &LaurentPoly, writhe: i64) -> LaurentPoly {
    let w = writhe as i32;
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let f = bracket.shift(-3 * w);
    let f = LaurentPoly::from_terms(f.terms().map(|(e, c)| (e, c * sign)));
    // A = t^{-1/4}: A^k = (t^{1/2})^{-k/2}
    f.scale_exponents(-1)
        .divide_exponents(2)
        .expect("odd power of A in a normalized bracket")
}

pub fn jones(diag: &LinkDiagram) -> LaurentPoly {
    jones_from_bracket(&kauffman_bracket(diag), diag.writhe())
}

/// `|V(-1)|` with `t^{1/2} = i`.
pub fn determinant_from_jones(v: &LaurentPoly) -> u64 {
    let (re, im) = v.eval_at_i();
    let n2 = (re * re + im * im) as u128;
    let r = (n2 as f64).sqrt().round() as u128;
    let r = (r.saturating_sub(2)..=r + 2).find(|k| k * k == n2).unwrap_or(r);
    r as u64
}

pub fn determinant(diag: &LinkDiagram) -> u64 {
    determinant_from_jones(&jones(diag))
}
