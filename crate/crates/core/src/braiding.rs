//! Quasipositive band words read off the disk-and-band surface of a divide.
//!
//! Each rank is a disk. Bands are read in one sweep that climbs through the
//! lower halves of the tangles and comes back down through the upper halves:
//! the lower band of every crossing, every cup and every Y-cup in ascending
//! height, then the upper band of every crossing, every cap and every Y-cap in
//! descending height.

use std::collections::HashMap;

use crate::braid::{Band, BandWord, Letter};
use crate::divide::{counts, require_valid, DivideError, GraphDivide, Kind, Side, Sign};

fn sgn(s: Sign) -> Letter {
    match s {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

/// Over (+1) or under (-1) for a band on `side` passing the disk of rank `t`.
fn passing(at: &HashMap<(usize, Side), Kind>, t: usize, side: Side) -> Letter {
    let flip = match side {
        Side::Top => 1,
        Side::Bottom => -1,
    };
    match at.get(&(t, side)) {
        Some(Kind::End { sign, .. }) => flip * sgn(*sign),
        Some(Kind::YCup { mid, sign, .. } | Kind::YCap { mid, sign, .. }) if *mid == t => -flip * sgn(*sign),
        Some(
            Kind::Cup { i, .. } | Kind::Cap { i, .. } | Kind::YCup { i, .. } | Kind::YCap { i, .. },
        ) if *i == t => 1,
        _ => -1,
    }
}

/// The band joining disks `i < j`, passing each disk strictly between them.
fn band(i: usize, j: usize, pass: impl Fn(usize) -> Letter) -> Band {
    Band {
        conj: (i + 1..j).rev().map(|t| pass(t) * t as Letter).collect(),
        core: i as u32,
    }
}

/// Fold band then vertex band of a Y-tangle. The vertex band joins the middle
/// leg to the outer leg picked by the sign.
fn y_bands(at: &HashMap<(usize, Side), Kind>, i: usize, mid: usize, j: usize, sign: Sign, side: Side) -> [Band; 2] {
    let fold = band(i, j, |t| passing(at, t, side));
    let to_left = (sign == Sign::Plus) == (side == Side::Top);
    let vertex = if to_left {
        band(i, mid, |t| passing(at, t, side))
    } else {
        band(mid, j, |t| passing(at, t, side))
    };
    [fold, vertex]
}

/// The quasipositive band word of `F(P)`, on one strand per chain.
pub fn band_word(d: &GraphDivide) -> Result<BandWord, DivideError> {
    require_valid(d)?;
    let mut at = HashMap::new();
    for c in &d.connectors {
        for end in c.kind.consumes() {
            at.insert(end, c.kind);
        }
    }
    let mut cs = d.connectors.clone();
    cs.sort_by_key(|c| c.h);
    let mut rising = Vec::new();
    let mut falling: Vec<Vec<Band>> = Vec::new();
    for c in &cs {
        match c.kind {
            Kind::Cross { i } => {
                rising.push(Band { conj: vec![], core: i as u32 });
                falling.push(vec![Band { conj: vec![], core: i as u32 }]);
            }
            Kind::Cup { i, j } => rising.push(band(i, j, |t| passing(&at, t, Side::Bottom))),
            Kind::Cap { i, j } => falling.push(vec![band(i, j, |t| passing(&at, t, Side::Top))]),
            Kind::YCup { i, mid, j, sign } => rising.extend(y_bands(&at, i, mid, j, sign, Side::Bottom)),
            Kind::YCap { i, mid, j, sign } => falling.push(y_bands(&at, i, mid, j, sign, Side::Top).to_vec()),
            Kind::End { .. } | Kind::Boundary { .. } => {}
        }
    }
    let mut bands = rising;
    bands.extend(falling.into_iter().rev().flatten());
    Ok(BandWord { strands: d.n_chains as u32, bands })
}

/// Upper bound `(v + 2m) / 2` on the braid index.
pub fn braid_index_bound(d: &GraphDivide) -> Result<usize, DivideError> {
    let c = counts(d)?;
    Ok((c.v + 2 * c.m) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;

    #[test]
    fn alpha_is_three_short_bands() {
        let d = parse_divide("chains 2\nend 1 bottom 0 +\nend 2 bottom 1 +\ncross 1 3\ncap 1 2 5\n").unwrap();
        let w = band_word(&d).unwrap();
        assert_eq!(w.flatten().letters, vec![1, 1, 1]);
        assert_eq!(braid_index_bound(&d).unwrap(), 2);
    }
}
