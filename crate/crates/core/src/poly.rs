//! Term-multiset polynomials: `Σ c·s^a` and `Σ c·s^a t^b` over Z/mZ
//! exponents, and the integer-exponent in-degree polynomial.
//!
//! Canonical text suppresses zero exponents and unit coefficients, e.g.
//! `6+12s+12s^2` and `6+12st+12s^2t^2`. The zero polynomial prints as `0`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmat::check_modulus;

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, coeff: u64, vars: &[(char, u64)]) -> fmt::Result {
    if !first {
        f.write_str("+")?;
    }
    let monomial: String = vars
        .iter()
        .filter(|&&(_, e)| e > 0)
        .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if monomial.is_empty() {
        write!(f, "{coeff}")
    } else if coeff == 1 {
        f.write_str(&monomial)
    } else {
        write!(f, "{coeff}{monomial}")
    }
}

/// Parse `c s^a t^b + ...` into `(coeff, [exp per variable])` triples.
/// Terms may appear in any order and repeat.
fn parse_terms(text: &str, vars: &[char]) -> Result<Vec<(u64, Vec<u64>)>> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let end = text.len();
    let pos = |i: usize| chars.get(i).map_or(end, |&(p, _)| p);
    let syntax = |i: usize, message: &str| Error::Syntax {
        pos: pos(i),
        message: message.to_string(),
    };
    let number = |i: &mut usize| -> Result<Option<u64>> {
        let start = *i;
        let mut v: u64 = 0;
        while let Some(&(_, c)) = chars.get(*i).filter(|(_, c)| c.is_ascii_digit()) {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c as u8 - b'0')))
                .ok_or_else(|| syntax(start, "integer too large"))?;
            *i += 1;
        }
        Ok((*i > start).then_some(v))
    };

    if chars.is_empty() {
        return Err(syntax(0, "empty polynomial"));
    }
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let coeff = number(&mut i)?;
        if chars.get(i).is_some_and(|&(_, c)| c == '*') {
            i += 1;
        }
        let mut exps = vec![0u64; vars.len()];
        let mut any_var = false;
        while let Some(k) = chars.get(i).and_then(|&(_, c)| vars.iter().position(|&v| v == c)) {
            i += 1;
            let e = if chars.get(i).is_some_and(|&(_, c)| c == '^') {
                i += 1;
                number(&mut i)?.ok_or_else(|| syntax(i, "expected an exponent"))?
            } else {
                1
            };
            exps[k] += e;
            any_var = true;
        }
        if coeff.is_none() && !any_var {
            return Err(syntax(i, "expected a term"));
        }
        out.push((coeff.unwrap_or(1), exps));
        match chars.get(i) {
            None => return Ok(out),
            Some(&(_, '+')) => i += 1,
            Some(&(_, c)) => return Err(syntax(i, &format!("unexpected {c:?}"))),
        }
    }
}

/// `Σ c·s^a` with exponents in Z/mZ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightPolynomial {
    modulus: u64,
    terms: BTreeMap<u64, u64>,
}

impl WeightPolynomial {
    pub fn zero(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(WeightPolynomial {
            modulus,
            terms: BTreeMap::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Add `coeff·s^exp`; `exp` is reduced mod m.
    pub fn add_term(&mut self, exp: u64, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry(exp % self.modulus).or_insert(0) += coeff;
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.iter().map(|(&a, &c)| (a, c))
    }

    pub fn coefficient(&self, exp: u64) -> u64 {
        self.terms.get(&(exp % self.modulus)).copied().unwrap_or(0)
    }

    /// Sum of coefficients (the value at `s = 1`).
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&a| a == 0)
    }

    pub fn scaled(&self, k: u64) -> Self {
        let mut out = WeightPolynomial::zero(self.modulus).expect("valid modulus");
        for (a, c) in self.terms() {
            out.add_term(a, c * k);
        }
        out
    }

    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        let mut p = WeightPolynomial::zero(modulus)?;
        for (c, e) in parse_terms(text, &['s'])? {
            p.add_term(e[0] % modulus, c);
        }
        Ok(p)
    }
}

impl fmt::Display for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms().enumerate() {
            write_term(f, i == 0, c, &[('s', a)])?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WeightPolynomialJson {
    modulus: u64,
    terms: Vec<(u64, u64)>,
}

impl Serialize for WeightPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightPolynomialJson {
            modulus: self.modulus,
            terms: self.terms().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = WeightPolynomialJson::deserialize(d)?;
        let mut p = WeightPolynomial::zero(raw.modulus).map_err(serde::de::Error::custom)?;
        for (a, c) in raw.terms {
            p.add_term(a, c);
        }
        Ok(p)
    }
}

/// `Σ c·s^a t^b` with exponents in Z/mZ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverPolynomial {
    modulus: u64,
    terms: BTreeMap<(u64, u64), u64>,
}

impl QuiverPolynomial {
    pub fn zero(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(QuiverPolynomial {
            modulus,
            terms: BTreeMap::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn add_term(&mut self, a: u64, b: u64, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry((a % self.modulus, b % self.modulus)).or_insert(0) += coeff;
        }
    }

    pub fn add(&self, other: &QuiverPolynomial) -> Result<QuiverPolynomial> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.add_term(a, b, c);
        }
        Ok(out)
    }

    /// Nonzero terms `(a, b, coefficient)` sorted by `(a, b)`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn coefficient(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus;
        self.terms.get(&(a % m, b % m)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        let mut p = QuiverPolynomial::zero(modulus)?;
        for (c, e) in parse_terms(text, &['s', 't'])? {
            p.add_term(e[0] % modulus, e[1] % modulus, c);
        }
        Ok(p)
    }
}

impl fmt::Display for QuiverPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, b, c)) in self.terms().enumerate() {
            write_term(f, i == 0, c, &[('s', a), ('t', b)])?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverPolynomialJson {
    modulus: u64,
    terms: Vec<(u64, u64, u64)>,
}

impl Serialize for QuiverPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverPolynomialJson {
            modulus: self.modulus,
            terms: self.terms().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuiverPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QuiverPolynomialJson::deserialize(d)?;
        let mut p = QuiverPolynomial::zero(raw.modulus).map_err(serde::de::Error::custom)?;
        for (a, b, c) in raw.terms {
            p.add_term(a, b, c);
        }
        Ok(p)
    }
}

/// `Σ c·s^k` with non-negative integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    terms: BTreeMap<u64, u64>,
}

impl IntPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, exp: u64, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry(exp).or_insert(0) += coeff;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.iter().map(|(&a, &c)| (a, c))
    }

    pub fn coefficient(&self, exp: u64) -> u64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = IntPolynomial::new();
        for (c, e) in parse_terms(text, &['s'])? {
            p.add_term(e[0], c);
        }
        Ok(p)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms().enumerate() {
            write_term(f, i == 0, c, &[('s', a)])?;
        }
        Ok(())
    }
}
