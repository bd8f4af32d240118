//! Small expression reader for coefficients and polynomials, e.g.
//! `"2*s + 12/s"`, `"-(p1^2/2 + phi*p1 + phi^2/4)"` or `"x^2 - x*y + 3"`.
//!
//! Identifiers are either polynomial variables (caller supplied) or scalar
//! symbols (`s` and the free parameter names). `sqrt(k)` accepts a
//! non-negative integer literal.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::laurent::symbol_index;
use super::{parse_rational, LaurentScalar, Poly, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message} at offset {offset} in `{input}`")]
pub struct ParseError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                i += 1;
            }
            out.push((start, Tok::Num(bytes[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { input: input.into(), offset: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
}

type P = Poly<LaurentScalar>;

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        let offset = self.toks.get(self.pos).map_or(self.input.len(), |t| t.0);
        ParseError { input: self.input.into(), offset, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn constant(&self, c: LaurentScalar) -> P {
        P::constant(self.vars.len(), c)
    }

    fn expr(&mut self) -> Result<P, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs.add(&self.term()?);
            } else if self.eat('-') {
                lhs = lhs.sub(&self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<P, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs.mul(&self.unary()?);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = self.divide(&lhs, &rhs)?;
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // implicit multiplication: `2s`, `3(p1+phi)`
                lhs = lhs.mul(&self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<P, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<P, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let k: i32 = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.parse().map_err(|_| self.err("exponent must be an integer"))?
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let neg = self.eat('-');
                let k: i32 = match self.peek().cloned() {
                    Some(Tok::Num(n)) => {
                        self.pos += 1;
                        n.parse().map_err(|_| self.err("exponent must be an integer"))?
                    }
                    _ => return Err(self.err("exponent must be an integer")),
                };
                self.expect(')')?;
                if neg {
                    -k
                } else {
                    k
                }
            }
            _ => return Err(self.err("exponent must be an integer")),
        };
        let k = if negative { -k } else { k };
        if k >= 0 {
            return Ok(base.pow(k as u32));
        }
        let c = self.as_constant(&base).ok_or_else(|| self.err("negative power of a non-constant"))?;
        let inv = c.pow(k).ok_or_else(|| self.err("negative power of a non-monomial"))?;
        Ok(self.constant(inv))
    }

    fn atom(&mut self) -> Result<P, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let q = parse_rational(&n).ok_or_else(|| self.err(format!("bad number `{n}`")))?;
                Ok(self.constant(LaurentScalar::from_rational(q)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    let q = self
                        .as_constant(&arg)
                        .and_then(|c| c.as_rational())
                        .ok_or_else(|| self.err("sqrt expects a rational constant"))?;
                    return self.sqrt_rational(&q);
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(P::var(self.vars.len(), i));
                }
                if let Some(i) = symbol_index(&name) {
                    return Ok(self.constant(LaurentScalar::param(i)));
                }
                Err(self.err(format!("unknown identifier `{name}`")))
            }
            _ => Err(self.err("unexpected end of input or operator")),
        }
    }

    fn sqrt_rational(&self, q: &Rational) -> Result<P, ParseError> {
        if q.is_negative() {
            return Err(self.err("sqrt of a negative number"));
        }
        if q.is_zero() {
            return Ok(P::zero(self.vars.len()));
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let nd: BigInt = q.numer() * q.denom();
        let root = LaurentScalar::sqrt_int(&nd).ok_or_else(|| self.err("sqrt argument too large"))?;
        let c = root.scale(&Rational::new(1.into(), q.denom().clone()));
        Ok(self.constant(c))
    }

    fn as_constant(&self, p: &P) -> Option<LaurentScalar> {
        match p.degree() {
            None => Some(LaurentScalar::zero()),
            Some(0) => Some(p.coefficient(&vec![0; self.vars.len()])),
            _ => None,
        }
    }

    fn divide(&self, lhs: &P, rhs: &P) -> Result<P, ParseError> {
        if let Some(c) = self.as_constant(rhs) {
            if c.is_zero() {
                return Err(self.err("division by zero"));
            }
            let mut out = P::zero(self.vars.len());
            for (e, a) in lhs.terms() {
                let q = a.try_div(&c).ok_or_else(|| self.err("division by a non-monomial scalar"))?;
                out.add_term(e.clone(), q);
            }
            return Ok(out);
        }
        lhs.exact_div(rhs).ok_or_else(|| self.err("polynomial division is not exact"))
    }
}

/// Parses a polynomial in `vars` with Laurent coefficients.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<Poly<LaurentScalar>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { input: text, toks, pos: 0, vars };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial in `vars` whose coefficients must be rational.
pub fn parse_rational_poly(text: &str, vars: &[&str]) -> Result<Poly<Rational>, ParseError> {
    let p = parse_poly(text, vars)?;
    let mut out = Poly::zero(vars.len());
    for (e, c) in p.terms() {
        let q = c.as_rational().ok_or_else(|| ParseError {
            input: text.into(),
            offset: 0,
            message: format!("coefficient `{c}` is not rational"),
        })?;
        out.add_term(e.clone(), q);
    }
    Ok(out)
}

/// Parses a scalar Laurent expression in `s` and free parameters.
pub fn parse_laurent(text: &str) -> Result<LaurentScalar, ParseError> {
    let p = parse_poly(text, &[])?;
    Ok(p.coefficient(&[]))
}
