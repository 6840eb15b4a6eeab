//! Potential expressions for custom models.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'x' | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must be non-negative integers, so every expression is built from
//! polynomial and exponential atoms.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
            Expr::Exp(a) => a.eval(x).exp(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(msg: impl Into<String>, pos: usize) -> Error {
    Error::Config(format!("potential expression: {} at offset {pos}", msg.into()))
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
            let k: u32 = digits
                .parse()
                .map_err(|_| err("exponent must be a non-negative integer", start))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err("expected ')'", self.pos));
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(b'e') if self.src[self.pos..].starts_with(b"exp") => {
                self.pos += 3;
                if !self.eat(b'(') {
                    return Err(err("expected '(' after exp", self.pos));
                }
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err("expected ')'", self.pos));
                }
                Ok(Expr::Exp(Box::new(e)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
                    self.pos += 1;
                }
                // exponent suffix such as 1e-3
                if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
                    let mut p = self.pos + 1;
                    if p < self.src.len() && (self.src[p] == b'+' || self.src[p] == b'-') {
                        p += 1;
                    }
                    if p < self.src.len() && self.src[p].is_ascii_digit() {
                        while p < self.src.len() && self.src[p].is_ascii_digit() {
                            p += 1;
                        }
                        self.pos = p;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                text.parse().map(Expr::Num).map_err(|_| err(format!("bad number '{text}'"), start))
            }
            Some(c) => Err(err(format!("unexpected '{}'", c as char), self.pos)),
            None => Err(err("unexpected end of input", self.pos)),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err("trailing input", p.pos));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        let cases = [
            ("x^2", 3.0, 9.0),
            ("4*(1 - exp(-x))^2", 0.0, 0.0),
            ("-2*x + 1.5e1", 1.0, 13.0),
            ("x/2 - -x", 2.0, 3.0),
            ("(2^3)^1", 0.0, 8.0),
            ("-x^2", 3.0, -9.0),
            ("exp(x) * exp(-x)", 7.0, 1.0),
        ];
        for (src, x, want) in cases {
            let got = parse(src).unwrap().eval(x);
            assert!((got - want).abs() < 1e-12, "{src}: {got}");
        }
    }

    #[test]
    fn morse_expression_matches() {
        let e = parse("4*(1-exp(-x))^2").unwrap();
        for &x in &[-1.0, 0.3, 5.0] {
            let t = 1.0 - f64::exp(-x);
            assert!((e.eval(x) - 4.0 * t * t).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects() {
        for src in ["", "x^-1", "x^0.5", "sin(x)", "(x", "x x", "exp x"] {
            assert!(matches!(parse(src), Err(Error::Config(_))), "{src}");
        }
    }
}
