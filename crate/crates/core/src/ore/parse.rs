//! Text syntax for operators, the same one `Display` produces:
//! `z`, base variable names, `th[x]` (or `d[x]` in classical signatures) for
//! `z d/dx`, `z2dz` for `z^2 d/dz`, rationals, `+ - * /`, `^k` and parentheses.
//! Products are taken left to right in the noncommutative algebra.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{OrePoly, Symbol};
use super::signature::OreSignature;
use crate::error::{Error, Result};
use crate::rational::Q;

pub fn parse_poly(sig: &Arc<OreSignature>, src: &str) -> Result<OrePoly> {
    let mut p = Parser {
        sig,
        s: src.as_bytes(),
        pos: 0,
    };
    let r = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    sig: &'a Arc<OreSignature>,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} of `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OrePoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<OrePoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                let c = scalar_of(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                if c == Q::from_integer(0.into()) {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<OrePoly> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let paren = self.eat(b'(');
            let k = self.integer()?;
            if paren && !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            return base.pow(k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected integer"))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<OrePoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(OrePoly::constant(self.sig, Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                let sym = match name.as_str() {
                    "z" => Symbol::Z,
                    "z2dz" => Symbol::Z2Dz,
                    "th" | "d" if self.peek() == Some(b'[') => {
                        self.pos += 1;
                        self.ws();
                        let v = self.ident();
                        if !self.eat(b']') {
                            return Err(self.err("expected `]`"));
                        }
                        Symbol::Theta(v)
                    }
                    _ => Symbol::Var(name),
                };
                OrePoly::symbol(self.sig, &sym)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

fn scalar_of(p: &OrePoly) -> Option<Q> {
    if p.is_zero() {
        return Some(Q::from_integer(0.into()));
    }
    if p.len() == 1 {
        let (e, c) = p.leading().unwrap();
        if e.is_one() {
            return Some(c.clone());
        }
    }
    None
}
