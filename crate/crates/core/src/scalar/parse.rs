//! Parser for the textual scalar syntax, e.g. `(q^2+1)/(q-1)` or `-1/2*q^3`.

use std::str::FromStr;

use num_bigint::BigInt;

use super::{Int, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\n' => {}
            'q' => out.push(Tok::Q),
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0'..='9' => {
                let start = i;
                while i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str(&s[start..=i])
                    .map_err(|e| Error::Parse(format!("bad integer: {e}")))?;
                out.push(Tok::Num(n));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}` at {i}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if self.eat(&Tok::Slash) {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::InvalidScalar("division by zero".into()));
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat(&Tok::LParen);
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let v = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        if paren && !self.eat(&Tok::RParen) {
            return Err(Error::Parse("expected `)` after exponent".into()));
        }
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.exponent()?;
            if e < 0 && base.is_zero() {
                return Err(Error::InvalidScalar("negative power of zero".into()));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Scalar::from_int(Int::from(n)))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(Scalar::q_pow(1))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::Parse("expected `)`".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "0",
            "1",
            "-1/2*q^3",
            "(q^2+1)/(q-1)",
            "q+q^-1",
            "2*q/(q^2-1)",
            "(q+1)/3",
            "-q^-2",
        ] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s, "round trip of {s}");
        }
    }

    #[test]
    fn arithmetic_in_syntax() {
        let v: Scalar = "(q^2-1)/(q-1)".parse().unwrap();
        assert_eq!(v.to_string(), "q+1");
        let w: Scalar = "(q-q^-1)^-1".parse().unwrap();
        assert_eq!(w.bar(), -&w);
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("q^".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }
}
