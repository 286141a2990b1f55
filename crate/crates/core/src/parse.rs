//! Recursive-descent parser for polynomials over Q.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := rational | identifier ('^' natural)? | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
}

pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        len: text.len(),
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if let Some(&(at, c)) = p.chars.get(p.pos) {
        return Err(p.error_at(at, format!("unexpected '{c}'")));
    }
    Ok(poly)
}

/// Parses `a` or `a/b` with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim();
    let err = || ParseError::SyntaxError {
        position: 0,
        message: format!("not a rational number: {text:?}"),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() || den.sign() == num_bigint::Sign::Minus {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.len)
    }

    fn error_at(&self, position: usize, message: String) -> ParseError {
        ParseError::SyntaxError { position, message }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.offset(), message.into())
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|&(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.natural()?;
                let mut value = Rational::from_integer(num);
                if self.eat('/') {
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.error("expected a denominator"));
                    }
                    let at = self.offset();
                    let den = self.natural()?;
                    if den.is_zero() {
                        return Err(self.error_at(at, "zero denominator".into()));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::constant(self.nvars(), value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.identifier();
                let index = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or(ParseError::UnknownVariable(name))?;
                let var = Polynomial::var(self.nvars(), index);
                if self.eat('^') {
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.error("expected an exponent"));
                    }
                    let at = self.offset();
                    let e = self.natural()?;
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| self.error_at(at, "exponent too large".into()))?;
                    Ok(var.pow(e))
                } else {
                    Ok(var)
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn natural(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let mut value = BigInt::zero();
        let ten = BigInt::from(10);
        let start = self.pos;
        while let Some(d) = self.chars.get(self.pos).and_then(|&(_, c)| c.to_digit(10)) {
            value = value * &ten + BigInt::from(d);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        Ok(value)
    }

    fn identifier(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }
}
