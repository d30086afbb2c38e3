//! Small expression reader for integrands.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*        division only by constants
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'x' index | 'X' | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! ```
//!
//! `x1 .. xn` are the coordinates (1-based) and `X` is their sum. Negative
//! exponents are accepted only on monomials of the form `c * X^k`.

use super::poly::MultiPoly;
use super::radial::RadialSum;
use super::rational::Rational;
use crate::error::{Error, Result};

pub fn parse_radial(n: usize, src: &str) -> Result<RadialSum> {
    let mut p = Parser { n, chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let value = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses a polynomial; fails on negative powers of `X`.
pub fn parse_poly(n: usize, src: &str) -> Result<MultiPoly> {
    parse_radial(n, src)?.to_poly()
}

struct Parser {
    n: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        Error::ParseExpr(format!("{msg} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer out of range"))
    }

    fn expr(&mut self) -> Result<RadialSum> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.try_add(&self.term()?.scale(&Rational::integer(-1)))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RadialSum> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat('/') {
                let denom = self.unary()?;
                let c = constant_of(&denom).ok_or_else(|| self.error("division by a non-constant"))?;
                acc = acc.scale(&c.recip()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RadialSum> {
        if self.eat('-') {
            return Ok(self.unary()?.scale(&Rational::integer(-1)));
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i32> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        let k = i32::try_from(k).map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -k } else { k })
    }

    fn power(&mut self) -> Result<RadialSum> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e >= 0 {
            let mut acc = RadialSum::power(self.n, Rational::one(), 0);
            for _ in 0..e {
                acc = acc.try_mul(&base)?;
            }
            return Ok(acc);
        }
        // Negative powers: only c * X^k.
        let mut terms = base.terms();
        match (terms.next(), terms.next()) {
            (Some((k, p)), None) => {
                let c = p.as_constant().ok_or_else(|| self.error("negative power of a non-monomial"))?;
                Ok(RadialSum::power(self.n, c.pow(e)?, k * e))
            }
            _ => Err(self.error("negative power of a non-monomial")),
        }
    }

    fn atom(&mut self) -> Result<RadialSum> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some('X') => {
                self.pos += 1;
                Ok(RadialSum::power(self.n, Rational::one(), 1))
            }
            Some('x') => {
                self.pos += 1;
                let idx = self.integer()? as usize;
                if idx == 0 || idx > self.n {
                    return Err(self.error(&format!("variable x{idx} outside 1..={}", self.n)));
                }
                Ok(RadialSum::from_poly(MultiPoly::var(self.n, idx - 1)?))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let v = i64::try_from(v).map_err(|_| self.error("integer out of range"))?;
                Ok(RadialSum::power(self.n, Rational::integer(v), 0))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}

fn constant_of(r: &RadialSum) -> Option<Rational> {
    let mut terms = r.terms();
    match (terms.next(), terms.next()) {
        (None, _) => Some(Rational::zero()),
        (Some((0, p)), None) => p.as_constant(),
        _ => None,
    }
}
