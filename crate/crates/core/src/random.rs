//! Random valid divides, built bottom to top as tangle products.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::divide::{branch_decomposition, BranchKind, Connector, GraphDivide, Kind, Side, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub max_chains: usize,
    pub max_connectors: usize,
    pub cross: bool,
    pub folds: bool,
    pub y: bool,
    pub free_ends: bool,
    pub boundary: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_chains: 4, max_connectors: 8, cross: true, folds: true, y: true, free_ends: true, boundary: true }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Unborn,
    Active,
    Dead,
}

fn sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// One attempt; `None` when the connector budget is exceeded.
fn attempt<R: Rng>(rng: &mut R, spec: &RandomSpec) -> Option<GraphDivide> {
    let n = rng.gen_range(1..=spec.max_chains.max(1));
    let mut st = vec![State::Unborn; n + 1];
    // Ranks that something passes under (before birth) or over (after death).
    let mut covered = vec![false; n + 1];
    let mut boundary_top = vec![false; n + 1];
    let mut connectors = Vec::new();
    let mut h = 0i64;
    let between = |st: &[State], i: usize, j: usize, skip: usize, want: State| {
        (i + 1..j).all(|k| k == skip || st[k] == want)
    };
    while (1..=n).any(|r| st[r] != State::Dead) {
        if connectors.len() > spec.max_connectors {
            return None;
        }
        let mut moves: Vec<Kind> = Vec::new();
        for r in 1..=n {
            let side = match st[r] {
                State::Unborn => Side::Bottom,
                State::Active => Side::Top,
                State::Dead => continue,
            };
            if spec.free_ends || !spec.boundary {
                moves.push(Kind::End { i: r, side, sign: sign(rng) });
            }
            if spec.boundary && !(side == Side::Bottom && covered[r]) {
                moves.push(Kind::Boundary { i: r, side });
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let pair = [st[i], st[j]];
                if spec.folds && pair == [State::Unborn; 2] && between(&st, i, j, 0, State::Unborn) {
                    moves.push(Kind::Cup { i, j });
                }
                let clear = |skip: usize| (i + 1..j).all(|k| k == skip || !boundary_top[k]);
                if spec.folds && pair == [State::Active; 2] && between(&st, i, j, 0, State::Dead) && clear(0) {
                    moves.push(Kind::Cap { i, j });
                }
                if !spec.y {
                    continue;
                }
                for mid in i + 1..j {
                    if [st[i], st[mid], st[j]] == [State::Unborn; 3] && between(&st, i, j, mid, State::Unborn) {
                        moves.push(Kind::YCup { i, mid, j, sign: sign(rng) });
                    }
                    if [st[i], st[mid], st[j]] == [State::Active; 3] && between(&st, i, j, mid, State::Dead) && clear(mid) {
                        moves.push(Kind::YCap { i, mid, j, sign: sign(rng) });
                    }
                }
            }
        }
        if spec.cross {
            for i in 1..n {
                if st[i] == State::Active && st[i + 1] == State::Active {
                    // Weighted so crossings are not drowned out by end moves.
                    for _ in 0..3 {
                        moves.push(Kind::Cross { i });
                    }
                }
            }
        }
        let kind = *moves.choose(rng)?;
        match kind {
            Kind::Cup { i, j } => (i + 1..j).for_each(|k| covered[k] = true),
            Kind::YCup { i, mid, j, .. } => (i + 1..j).filter(|&k| k != mid).for_each(|k| covered[k] = true),
            Kind::Boundary { i, side: Side::Top } => boundary_top[i] = true,
            _ => {}
        }
        for (r, side) in kind.consumes() {
            st[r] = match side {
                Side::Bottom => State::Active,
                Side::Top => State::Dead,
            };
        }
        connectors.push(Connector { h, kind });
        h += 1;
    }
    (connectors.len() <= spec.max_connectors).then(|| GraphDivide {
        name: "random".into(),
        n_chains: n,
        connectors,
    })
}

/// A valid divide drawn from `spec`.
pub fn random_divide<R: Rng>(rng: &mut R, spec: &RandomSpec) -> GraphDivide {
    loop {
        if let Some(d) = attempt(rng, spec) {
            return d;
        }
    }
}

/// A connected divide whose only branch is an interval or a tree, without double points.
pub fn random_embedded_tree<R: Rng>(rng: &mut R, max_connectors: usize) -> GraphDivide {
    let spec = RandomSpec { max_chains: 6, max_connectors, cross: false, ..RandomSpec::default() };
    loop {
        let d = random_divide(rng, &spec);
        let branches = branch_decomposition(&d).expect("generated divide is valid");
        if let [b] = branches.as_slice() {
            if matches!(b.kind, BranchKind::Interval | BranchKind::Tree) {
                return d;
            }
        }
    }
}
