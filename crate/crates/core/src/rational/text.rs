//! Fully parenthesised text form of expressions.
//!
//! ```text
//! expr    := gen | scalar | sum | product | inverse
//! gen     := X<k> | Y<k> | Z<k> | G<k>          (k ≥ 1)
//! scalar  := "{" poly "}"                        e.g. {q^-2}, {2q^3 - q + 1}
//! sum     := "(" expr (" + " expr)+ ")"
//! product := "(" expr (" * " expr)+ ")"
//! inverse := "inv(" expr ")"
//! poly    := ["-"] term ((" + " | " - ") term)*
//! term    := <int> | [<int>] "q" ["^" <int>]
//! ```
//!
//! `Y<k>` and `Z<k>` are the generators of triangle `k`; `X<k>` and `G<k>`
//! are generator `k`. A one-element sum or product is written as its element.

use std::fmt::Write;

use super::{Expr, Node, RationalError};
use crate::qtorus::{CoeffPoly, Signature};

pub(crate) fn write_expr(e: &Expr, sig: &Signature) -> String {
    let mut out = String::new();
    write_into(e, sig, &mut out, usize::MAX);
    out
}

/// Writes at most roughly `limit` bytes.
pub(crate) fn write_into(e: &Expr, sig: &Signature, out: &mut String, limit: usize) {
    if out.len() > limit {
        return;
    }
    match e.node() {
        Node::Gen(i) => out.push_str(&sig.generator_name(*i)),
        Node::Scalar(c) => {
            let _ = write!(out, "{{{c}}}");
        }
        Node::Sum(c) | Node::Product(c) => {
            let sep = if matches!(e.node(), Node::Sum(_)) { " + " } else { " * " };
            match c.len() {
                0 => out.push_str(if sep == " + " { "{0}" } else { "{1}" }),
                1 => write_into(&c[0], sig, out, limit),
                _ => {
                    out.push('(');
                    for (n, x) in c.iter().enumerate() {
                        if n > 0 {
                            out.push_str(sep);
                        }
                        write_into(x, sig, out, limit);
                    }
                    out.push(')');
                }
            }
        }
        Node::Inverse(c) => {
            out.push_str("inv(");
            write_into(c, sig, out, limit);
            out.push(')');
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn err<T>(&self, message: &str) -> Result<T, RationalError> {
        Err(RationalError::Parse { pos: self.pos, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), RationalError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn number(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).ok()?;
        match txt.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.pos = start;
                None
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, RationalError> {
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let c = self.poly()?;
                self.eat(b'}')?;
                Ok(Expr::scalar(c))
            }
            Some(b'(') => {
                self.pos += 1;
                let first = self.expr()?;
                let op = match self.peek() {
                    Some(b'+') => b'+',
                    Some(b'*') => b'*',
                    _ => return self.err("expected ` + ` or ` * `"),
                };
                let mut items = vec![first];
                while self.peek() == Some(op) {
                    self.pos += 1;
                    items.push(self.expr()?);
                }
                self.eat(b')')?;
                Ok(if op == b'+' { Expr::sum(items) } else { Expr::product(items) })
            }
            Some(b'i') => {
                if !self.s[self.pos..].starts_with(b"inv(") {
                    return self.err("expected `inv(`");
                }
                self.pos += 4;
                let inner = self.expr()?;
                self.eat(b')')?;
                inner.inverse()
            }
            Some(c @ (b'X' | b'Y' | b'Z' | b'G')) => {
                self.pos += 1;
                let k = match self.number() {
                    Some(k) if k >= 1 => k as usize - 1,
                    _ => return self.err("expected a generator number ≥ 1"),
                };
                let idx = match c {
                    b'Y' => 2 * k,
                    b'Z' => 2 * k + 1,
                    _ => k,
                };
                if idx >= self.sig.len() {
                    return self.err("generator out of range");
                }
                Ok(Expr::gen(idx))
            }
            _ => self.err("expected an expression"),
        }
    }

    fn poly(&mut self) -> Result<CoeffPoly, RationalError> {
        let mut terms = Vec::new();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let (k, c) = self.term()?;
            terms.push((k, sign * c));
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(CoeffPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(i32, i64), RationalError> {
        self.skip_ws();
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) { self.number() } else { None };
        if self.peek() == Some(b'q') {
            self.pos += 1;
            let k = if self.peek() == Some(b'^') {
                self.pos += 1;
                match self.number() {
                    Some(k) => k as i32,
                    None => return self.err("expected an exponent"),
                }
            } else {
                1
            };
            Ok((k, coeff.unwrap_or(1)))
        } else {
            match coeff {
                Some(c) => Ok((0, c)),
                None => self.err("expected a coefficient"),
            }
        }
    }
}

/// Reads the text form back. Generator names are resolved against `sig`.
pub fn parse_expr(text: &str, sig: &Signature) -> Result<Expr, RationalError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, sig };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}
