//! Braid words, band words and their closures.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Crossing, LinkDiagram};

/// A signed Artin generator: `+i` is `σ_i`, `-i` is `σ_i^{-1}`.
pub type Letter = i32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: u32,
    pub letters: Vec<Letter>,
}

/// One band `w σ_core w^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub conj: Vec<Letter>,
    pub core: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandWord {
    pub strands: u32,
    pub bands: Vec<Band>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("bad braid letter `{0}`")]
    BadLetter(String),
    #[error("generator {letter} out of range for {strands} strands")]
    OutOfRange { letter: Letter, strands: u32 },
}

pub fn inverse(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| -l).collect()
}

impl Band {
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = self.conj.clone();
        out.push(self.core as Letter);
        out.extend(inverse(&self.conj));
        out
    }
}

impl BandWord {
    pub fn flatten(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.bands.iter().flat_map(Band::letters).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.bands
                .iter()
                .map(|b| serde_json::json!({ "conj": b.conj, "core": b.core }))
                .collect(),
        )
    }

    /// Every band is a conjugate of a positive generator in range.
    pub fn is_quasipositive_syntactic(&self) -> bool {
        self.bands.iter().all(|b| {
            b.core >= 1
                && b.core < self.strands
                && b.conj.iter().all(|&l| l != 0 && l.unsigned_abs() < self.strands)
        })
    }

    /// Every band is an embedded positive band `σ_i … σ_{j-1} σ_j σ_{j-1}^{-1} … σ_i^{-1}`.
    pub fn is_strongly_quasipositive_syntactic(&self) -> bool {
        self.is_quasipositive_syntactic()
            && self.bands.iter().all(|b| {
                let j = b.core as Letter;
                let i = j - b.conj.len() as Letter;
                i >= 1 && b.conj.iter().copied().eq(i..j)
            })
    }
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<Letter>) -> Result<Self, BraidError> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(BraidError::OutOfRange { letter: l, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    /// Parses `s1 s4 s4' …`; the strand count defaults to one more than the largest index.
    pub fn parse(text: &str, strands: Option<u32>) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let bad = || BraidError::BadLetter(tok.to_string());
            let body = tok.strip_prefix('s').ok_or_else(bad)?;
            let (digits, inv) = match body.strip_suffix('\'') {
                Some(d) => (d, true),
                None => (body, false),
            };
            let i: Letter = digits.parse().map_err(|_| bad())?;
            if i <= 0 {
                return Err(bad());
            }
            letters.push(if inv { -i } else { i });
        }
        let need = letters.iter().map(|l| l.unsigned_abs() + 1).max().unwrap_or(1);
        Self::new(strands.unwrap_or(need), letters)
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&l| l > 0)
    }

    /// Each letter as its own band with empty conjugator (positive words only).
    pub fn as_positive_bands(&self) -> Option<BandWord> {
        self.is_positive().then(|| BandWord {
            strands: self.strands,
            bands: self
                .letters
                .iter()
                .map(|&l| Band { conj: Vec::new(), core: l as u32 })
                .collect(),
        })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|&l| if l > 0 { format!("s{l}") } else { format!("s{}'", -l) })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// PD code of the closure, strands oriented downward.
pub fn closure_diagram(word: &BraidWord) -> LinkDiagram {
    let n = word.strands as usize;
    let initial: Vec<u32> = (1..=n as u32).collect();
    let mut cur = initial.clone();
    let mut next = n as u32 + 1;
    let mut crossings = Vec::with_capacity(word.letters.len());
    for &l in &word.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (tl, tr) = (cur[i], cur[i + 1]);
        let (bl, br) = (next, next + 1);
        next += 2;
        crossings.push(if l > 0 {
            Crossing { pd: [tl, bl, br, tr], positive: true }
        } else {
            Crossing { pd: [tr, tl, bl, br], positive: false }
        });
        cur[i] = bl;
        cur[i + 1] = br;
    }
    let mut free_loops = 0;
    for p in 0..n {
        if cur[p] == initial[p] {
            free_loops += 1;
            continue;
        }
        for x in crossings.iter_mut() {
            for lab in x.pd.iter_mut() {
                if *lab == cur[p] {
                    *lab = initial[p];
                }
            }
        }
    }
    LinkDiagram { crossings, free_loops }.relabel()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let w = BraidWord::parse("s1 s4 s4' s3", None).unwrap();
        assert_eq!(w.strands, 5);
        assert_eq!(w.letters, vec![1, 4, -4, 3]);
        assert_eq!(w.to_string(), "s1 s4 s4' s3");
        assert!(BraidWord::parse("t1", None).is_err());
        assert!(BraidWord::parse("s2", Some(2)).is_err());
    }

    #[test]
    fn strong_pattern() {
        let bw = |conj: Vec<Letter>, core| BandWord { strands: 4, bands: vec![Band { conj, core }] };
        assert!(bw(vec![], 1).is_strongly_quasipositive_syntactic());
        assert!(bw(vec![1, 2], 3).is_strongly_quasipositive_syntactic());
        assert!(!bw(vec![2], 1).is_strongly_quasipositive_syntactic());
        assert!(bw(vec![2], 1).is_quasipositive_syntactic());
        assert!(!bw(vec![-2], 3).is_strongly_quasipositive_syntactic());
    }

    #[test]
    fn closure_counts() {
        let d = closure_diagram(&BraidWord::new(2, vec![1, 1, 1]).unwrap());
        d.check().unwrap();
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.component_count(), 1);
        let u = closure_diagram(&BraidWord::new(1, vec![]).unwrap());
        assert_eq!(u.component_count(), 1);
        let h = closure_diagram(&BraidWord::new(3, vec![1, 1]).unwrap());
        assert_eq!(h.component_count(), 3);
    }
}
