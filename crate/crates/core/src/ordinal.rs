//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly
//! decreasing exponents (themselves ordinals) and positive natural
//! coefficients. The empty sum is `0`.
//!
//! The textual form used everywhere in reports is `w^e*c + …` without
//! spaces, e.g. `w^2*3+w+5`. Compound exponents are parenthesised:
//! `w^(w+1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    /// (exponent, coefficient), exponents strictly decreasing.
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds an ordinal from raw CNF terms, checking the invariants.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(OrdinalError::NotNormal);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::ZeroCoefficient);
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((e, _)) if e.is_zero() => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    /// Largest limit ordinal `≤ self`, or 0 when there is none.
    pub fn omega_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if matches!(terms.last(), Some((e, _)) if e.is_zero()) {
            terms.pop();
        }
        Ordinal { terms }
    }

    /// The natural `m` with `self = omega_part(self) + m`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(((lead_exp, lead_coeff), rest)) = rhs.terms.split_first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        for (e, c) in &self.terms {
            match e.cmp(lead_exp) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => {
                    let sum = c.checked_add(*lead_coeff).expect("ordinal coefficient overflow");
                    terms.push((e.clone(), sum));
                }
                Ordering::Less => break,
            }
        }
        if !matches!(terms.last(), Some((e, _)) if e == lead_exp) {
            terms.push((lead_exp.clone(), *lead_coeff));
        }
        terms.extend(rest.iter().cloned());
        Ordinal { terms }
    }

    /// Ordinal product `self · rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead_exp) = self.leading_exponent() else {
            return Ordinal::zero();
        };
        let mut out = Ordinal::zero();
        for (e, c) in &rhs.terms {
            let piece = if e.is_zero() {
                // self · c: only the leading coefficient is scaled
                let mut terms = self.terms.clone();
                terms[0].1 = terms[0].1.checked_mul(*c).expect("ordinal coefficient overflow");
                Ordinal { terms }
            } else {
                Ordinal {
                    terms: vec![(lead_exp.add(e), *c)],
                }
            };
            out = out.add(&piece);
        }
        out
    }

    /// `self · n` for a natural `n`.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        self.mul(&Ordinal::nat(n))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((e1, c1), (e2, c2)) in self.terms.iter().zip(&other.terms) {
            match e1.cmp(e2).then(c1.cmp(c2)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            if *e != Ordinal::one() {
                if e.is_finite() || *e == Ordinal::omega() {
                    write!(f, "^{e}")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("exponents must be strictly decreasing")]
    NotNormal,
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("unexpected {found:?} at offset {pos} in ordinal expression")]
    Unexpected { pos: usize, found: Option<char> },
    #[error("number too large at offset {0}")]
    Overflow(usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        // 'ω' is two bytes in UTF-8; treat it as 'w'
        if self.src[self.pos..].starts_with("ω".as_bytes()) {
            return Some('w');
        }
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn bump(&mut self) {
        if self.src[self.pos..].starts_with("ω".as_bytes()) {
            self.pos += "ω".len();
        } else {
            self.pos += 1;
        }
    }

    fn unexpected(&mut self) -> OrdinalError {
        let found = self.peek();
        OrdinalError::Unexpected { pos: self.pos, found }
    }

    fn expect(&mut self, c: char) -> Result<(), OrdinalError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| OrdinalError::Overflow(start))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.peek() == Some('+') {
            self.bump();
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        let base = match self.peek() {
            Some('w') => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    let exp = match self.peek() {
                        Some('(') => {
                            self.bump();
                            let e = self.sum()?;
                            self.expect(')')?;
                            e
                        }
                        Some('w') => {
                            self.bump();
                            Ordinal::omega()
                        }
                        Some(c) if c.is_ascii_digit() => Ordinal::nat(self.nat()?),
                        _ => return Err(self.unexpected()),
                    };
                    Ordinal::omega_pow(exp)
                } else {
                    Ordinal::omega()
                }
            }
            Some('(') => {
                self.bump();
                let e = self.sum()?;
                self.expect(')')?;
                e
            }
            Some(c) if c.is_ascii_digit() => Ordinal::nat(self.nat()?),
            _ => return Err(self.unexpected()),
        };
        if self.peek() == Some('*') {
            self.bump();
            let n = self.nat()?;
            return Ok(base.mul_nat(n));
        }
        Ok(base)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.sum()?;
        if p.peek().is_some() {
            return Err(p.unexpected());
        }
        Ok(v)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(o("w*2+3").cmp(&o("w*3")), Ordering::Less);
        assert_eq!(o("w").cmp(&o("w")), Ordering::Equal);
        assert_eq!(o("w^2").cmp(&o("w*5+9")), Ordering::Greater);
        assert!(o("w^w") > o("w^100*7"));
        assert!(o("0") < o("1"));
    }

    #[test]
    fn addition() {
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("1")).to_string(), "w+1");
        assert_eq!(o("w*2+3").add(&o("w+1")).to_string(), "w*3+1");
        assert_eq!(o("w^2+w").add(&o("w^2")).to_string(), "w^2*2");
        assert_eq!(o("w+5").add(&o("0")), o("w+5"));
    }

    #[test]
    fn multiplication() {
        assert_eq!(o("1").mul(&o("w+1")).to_string(), "w+1");
        assert_eq!(o("2").mul(&o("w")), o("w"));
        assert_eq!(o("w+1").mul(&o("w")).to_string(), "w^2");
        assert_eq!(o("w+1").mul(&o("2")).to_string(), "w*2+1");
        assert_eq!(o("w*2+1").mul(&o("w+1")).to_string(), "w^2+w*2+1");
        assert_eq!(o("w").mul(&o("w^w")).to_string(), "w^w");
        assert!(o("0").mul(&o("w")).is_zero());
    }

    #[test]
    fn omega_part_and_kind() {
        assert_eq!(o("w*2+3").omega_part(), o("w*2"));
        assert_eq!(o("5").omega_part(), o("0"));
        assert_eq!(o("w^2").omega_part(), o("w^2"));
        assert_eq!(o("0").classify(), OrdinalKind::Zero);
        assert_eq!(o("w+1").classify(), OrdinalKind::Successor);
        assert_eq!(o("w").mul(&o("w")).classify(), OrdinalKind::Limit);
    }

    #[test]
    fn rendering_round_trips() {
        for s in ["0", "7", "w", "w*2+1", "w^2*3+w+5", "w^w", "w^(w+1)*2+w^w+3", "w^(w^2)"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o(" w * 2 + 1 ").to_string(), "w*2+1");
        assert_eq!(o("ω+1").to_string(), "w+1");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Ordinal>().is_err());
        assert!("w+".parse::<Ordinal>().is_err());
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
        assert!("w^(w".parse::<Ordinal>().is_err());
        assert!("99999999999999999999999".parse::<Ordinal>().is_err());
    }

    #[test]
    fn from_terms_checks_normal_form() {
        assert!(Ordinal::from_terms(vec![(Ordinal::zero(), 1), (Ordinal::one(), 1)]).is_err());
        assert!(Ordinal::from_terms(vec![(Ordinal::one(), 0)]).is_err());
        assert!(Ordinal::from_terms(vec![(Ordinal::one(), 2), (Ordinal::zero(), 1)]).is_ok());
    }
}
