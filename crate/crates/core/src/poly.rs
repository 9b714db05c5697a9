use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Sparse Laurent polynomial with exact integer coefficients.
///
/// The meaning of an exponent unit is up to the caller. The bracket uses
/// powers of `A`; the Jones polynomial uses powers of `t^{1/2}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0) == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies every exponent by `k`.
    pub fn scale_exponents(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Multiplies by `x^s`.
    pub fn shift(&self, s: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + s, c)))
    }

    /// Exact division of all exponents by `k`, if every exponent is a multiple.
    pub fn divide_exponents(&self, k: i32) -> Option<Self> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(Self::from_terms(self.terms().map(|(e, c)| (e / k, c))))
    }

    /// Substitutes `x -> x^{-1}`.
    pub fn mirror(&self) -> Self {
        self.scale_exponents(-1)
    }

    /// Evaluates at a root of unity `x = i`, returning a Gaussian integer `(re, im)`.
    pub fn eval_at_i(&self) -> (i128, i128) {
        let (mut re, mut im) = (0i128, 0i128);
        for (e, c) in self.terms() {
            let c = c as i128;
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }

    /// Keys are exponents as decimal strings, matching the JSON report format.
    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.terms()
            .map(|(e, c)| (e.to_string(), serde_json::Value::from(c)))
            .collect()
    }

    /// Formats a polynomial whose exponents count half-powers of `var`.
    pub fn display_half(&self, var: &str) -> String {
        self.render(var, 2)
    }

    fn render(&self, var: &str, denom: i32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let (e, c) = (*e, *c);
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let exp = if e % denom == 0 {
                match e / denom {
                    0 => String::new(),
                    1 => var.to_string(),
                    k => format!("{var}^{k}"),
                }
            } else {
                format!("{var}^({e}/{denom})")
            };
            if exp.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&exp);
            } else {
                out.push_str(&format!("{mag}{exp}"));
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", 1))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", 1))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels_to_zero() {
        let p = LaurentPoly::from_terms([(-2, 3), (1, -1)]);
        assert!((&p - &p).is_zero());
        assert_eq!(&p + &LaurentPoly::zero(), p);
        assert_eq!(&p * &LaurentPoly::one(), p);
    }

    #[test]
    fn renders_half_exponents() {
        let p = LaurentPoly::from_terms([(8, -1), (6, 1), (2, 1)]);
        assert_eq!(p.display_half("t"), "-t^4 + t^3 + t");
        let q = LaurentPoly::from_terms([(-1, 1), (3, -2)]);
        assert_eq!(q.display_half("t"), "-2t^(3/2) + t^(-1/2)");
    }

    #[test]
    fn eval_at_i_cycles() {
        let p = LaurentPoly::from_terms([(0, 1), (1, 1), (2, 1), (3, 1), (-1, 5)]);
        assert_eq!(p.eval_at_i(), (0, -5));
    }
}
