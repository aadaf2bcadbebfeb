//! Recursive-descent parser for the expression syntax.
//!
//! Grammar (tightest first): `^` with a literal nonnegative integer
//! exponent, unary `-`, then `*` and `/`, then binary `+` and `-`, all
//! left-associative, with parentheses and the function calls `sin(…)`,
//! `cos(…)`, `exp(…)`.  Integer literals are arbitrary precision; a
//! rational literal is written `p/q` and folded to a single constant, as is
//! a leading sign on a literal.

use super::Expr;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::Zero;

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Largest accepted literal exponent; guards against runaway expansion.
const MAX_EXPONENT: u32 = 1_000_000;

pub(super) fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Consumes `op` if it is next (after whitespace).
    fn eat(&mut self, op: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = Expr::Add(Box::new(acc), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = Expr::Sub(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = Expr::Mul(Box::new(acc), Box::new(rhs));
            } else if self.eat(b'/') {
                let den_at = self.pos;
                let rhs = self.unary()?;
                if let Expr::Const(c) = &rhs {
                    if c.is_zero() {
                        return Err(ParseError {
                            offset: den_at,
                            message: "division by the constant zero".into(),
                        });
                    }
                }
                // Fold rational literals `p/q` into a single constant.
                acc = match (acc, rhs) {
                    (Expr::Const(a), Expr::Const(b)) => Expr::Const(a / b),
                    (a, b) => Expr::Div(Box::new(a), Box::new(b)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            // Fold a signed literal into the constant itself.
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(ParseError {
                    offset: at,
                    message: "exponent must be a nonnegative integer literal".into(),
                });
            }
            let exp: u32 = digits.parse().map_err(|_| ParseError {
                offset: at,
                message: "exponent out of range".into(),
            })?;
            if exp > MAX_EXPONENT {
                return Err(ParseError {
                    offset: at,
                    message: "exponent out of range".into(),
                });
            }
            base = Expr::Pow(Box::new(base), exp);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("digit run parses as integer");
                Ok(Expr::Const(Rational::from_integer(n)))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let at = self.pos;
                let name = self.ident();
                if self.eat(b'(') {
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.error("expected `)`"));
                    }
                    match name.as_str() {
                        "sin" => Ok(Expr::Sin(Box::new(arg))),
                        "cos" => Ok(Expr::Cos(Box::new(arg))),
                        "exp" => Ok(Expr::Exp(Box::new(arg))),
                        _ => Err(ParseError {
                            offset: at,
                            message: format!("unknown function `{name}`"),
                        }),
                    }
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(_) => Err(self.error("expected a number, variable, function or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }
}
