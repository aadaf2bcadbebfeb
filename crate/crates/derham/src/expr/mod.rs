//! Symbolic scalar expressions with exact rational constants.
//!
//! An [`Expr`] is an immutable tree over named variables supporting the
//! arithmetic operators, nonnegative integer powers and the transcendental
//! functions `sin`, `cos`, `exp`.  The module provides
//!
//! * a parser and a precedence-aware printer ([`Expr::parse`], `Display`),
//! * partial differentiation ([`Expr::diff`]),
//! * a canonical rational-function normal form ([`Expr::normalize`]): a single
//!   fraction of expanded polynomials over the variables and over opaque
//!   transcendental subterms, with the denominator scaled to integer
//!   coefficients of content one and positive leading coefficient,
//! * a tri-state zero test ([`Expr::is_zero`]) that is exact on the rational
//!   fragment and falls back to seeded random sampling otherwise, and
//! * numerical evaluation ([`Expr::eval`]) plus exact rational evaluation on
//!   the rational fragment ([`Expr::eval_exact`]).
//!
//! The identifier `pi` is reserved: it always denotes the circle constant.
//! Evaluation binds it automatically, differentiation treats it as constant
//! (it is never a coordinate), and the geometry layers refuse it as a
//! coordinate name.
//!
//! Expressions are immutable and freely shareable across threads.

mod compile;
mod normal;
mod parse;
mod zero;

pub use compile::CompiledExpr;
pub use parse::ParseError;
pub use zero::{Verdict, ZeroTest};

pub(crate) use normal::exact_zero;

use crate::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Reserved identifier for the circle constant.
pub const PI_NAME: &str = "pi";

/// A symbolic scalar expression.
///
/// Constants are exact rationals; `Pow` stores an explicit nonnegative
/// integer exponent.  Division nodes never carry a syntactically zero
/// constant denominator (the parser and constructors reject it).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

/// Errors raised by numerical or exact evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("`{0}` is not in the rational fragment")]
    NotRational(String),
}

/// Error raised by normalization when a denominator is identically zero.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("denominator `{0}` is identically zero")]
pub struct ZeroDenominator(pub String);

/// A finite assignment of `f64` values to variable names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalPoint(BTreeMap<String, f64>);

impl EvalPoint {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insertion.
    pub fn bind(mut self, name: impl Into<String>, value: f64) -> Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    /// Looks a name up, falling back to the built-in `pi` binding.
    pub fn get(&self, name: &str) -> Option<f64> {
        match self.0.get(name) {
            Some(v) => Some(*v),
            None if name == PI_NAME => Some(std::f64::consts::PI),
            None => None,
        }
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for EvalPoint {
    fn from_iter<T: IntoIterator<Item = (S, f64)>>(iter: T) -> Self {
        EvalPoint(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl Expr {
    /// Integer constant.
    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(BigInt::from(n)))
    }

    /// Rational constant `p/q`.  Panics if `q == 0`.
    pub fn rational(p: i64, q: i64) -> Expr {
        assert!(q != 0, "zero denominator in rational constant");
        Expr::Const(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn pow(self, exp: u32) -> Expr {
        Expr::Pow(Box::new(self), exp)
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::Sin(Box::new(arg))
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::Cos(Box::new(arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::Exp(Box::new(arg))
    }

    /// Parses the textual syntax.  See the module docs for the grammar;
    /// errors carry the byte offset of the offending token.
    pub fn parse(input: &str) -> Result<Expr, ParseError> {
        parse::parse(input)
    }

    /// The set of variable names occurring in the expression.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.collect_vars(out)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// True when the expression contains no `sin`/`cos`/`exp` node.
    pub fn is_rational_fragment(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_rational_fragment(),
            Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_fragment() && b.is_rational_fragment()
            }
        }
    }

    /// Numerical evaluation.  Unbound variables and exact division by zero
    /// are reported as errors; `pi` is bound automatically unless the point
    /// overrides it.
    pub fn eval(&self, point: &EvalPoint) -> Result<f64, EvalError> {
        match self {
            Expr::Const(c) => Ok(rational_to_f64(c)),
            Expr::Var(v) => point
                .get(v)
                .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Expr::Neg(a) => Ok(-a.eval(point)?),
            Expr::Add(a, b) => Ok(a.eval(point)? + b.eval(point)?),
            Expr::Sub(a, b) => Ok(a.eval(point)? - b.eval(point)?),
            Expr::Mul(a, b) => Ok(a.eval(point)? * b.eval(point)?),
            Expr::Div(a, b) => {
                let den = b.eval(point)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero(b.to_string()));
                }
                Ok(a.eval(point)? / den)
            }
            Expr::Pow(a, k) => Ok(a.eval(point)?.powi(*k as i32)),
            Expr::Sin(a) => Ok(a.eval(point)?.sin()),
            Expr::Cos(a) => Ok(a.eval(point)?.cos()),
            Expr::Exp(a) => Ok(a.eval(point)?.exp()),
        }
    }

    /// Exact evaluation on the rational fragment.  Transcendental nodes and
    /// the reserved `pi` are rejected with [`EvalError::NotRational`].
    pub fn eval_exact(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, EvalError> {
        match self {
            Expr::Const(c) => Ok(c.clone()),
            Expr::Var(v) => match point.get(v) {
                Some(x) => Ok(x.clone()),
                None if v == PI_NAME => Err(EvalError::NotRational(v.clone())),
                None => Err(EvalError::UnboundVariable(v.clone())),
            },
            Expr::Neg(a) => Ok(-a.eval_exact(point)?),
            Expr::Add(a, b) => Ok(a.eval_exact(point)? + b.eval_exact(point)?),
            Expr::Sub(a, b) => Ok(a.eval_exact(point)? - b.eval_exact(point)?),
            Expr::Mul(a, b) => Ok(a.eval_exact(point)? * b.eval_exact(point)?),
            Expr::Div(a, b) => {
                let den = b.eval_exact(point)?;
                if den.is_zero() {
                    return Err(EvalError::DivisionByZero(b.to_string()));
                }
                Ok(a.eval_exact(point)? / den)
            }
            Expr::Pow(a, k) => {
                let base = a.eval_exact(point)?;
                Ok(num_traits::pow::pow(base, *k as usize))
            }
            Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => {
                Err(EvalError::NotRational(self.to_string()))
            }
        }
    }

    /// Partial derivative with respect to `v`.
    ///
    /// The structural derivative is computed by the usual sum, product,
    /// quotient and chain rules and then normalized; if normalization fails
    /// (identically zero denominator somewhere) the structural result is
    /// returned untouched.
    pub fn diff(&self, v: &str) -> Expr {
        let raw = self.diff_structural(v);
        raw.normalize().unwrap_or(raw)
    }

    fn diff_structural(&self, v: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::int(0),
            Expr::Var(name) => {
                if name == v {
                    Expr::int(1)
                } else {
                    Expr::int(0)
                }
            }
            Expr::Neg(a) => Expr::Neg(Box::new(a.diff_structural(v))),
            Expr::Add(a, b) => Expr::Add(
                Box::new(a.diff_structural(v)),
                Box::new(b.diff_structural(v)),
            ),
            Expr::Sub(a, b) => Expr::Sub(
                Box::new(a.diff_structural(v)),
                Box::new(b.diff_structural(v)),
            ),
            Expr::Mul(a, b) => {
                let da = a.diff_structural(v);
                let db = b.diff_structural(v);
                Expr::Add(
                    Box::new(Expr::Mul(Box::new(da), b.clone())),
                    Box::new(Expr::Mul(a.clone(), Box::new(db))),
                )
            }
            Expr::Div(a, b) => {
                // (a/b)' = (a' b - a b') / b^2
                let da = a.diff_structural(v);
                let db = b.diff_structural(v);
                let num = Expr::Sub(
                    Box::new(Expr::Mul(Box::new(da), b.clone())),
                    Box::new(Expr::Mul(a.clone(), Box::new(db))),
                );
                Expr::Div(Box::new(num), Box::new(Expr::Pow(b.clone(), 2)))
            }
            Expr::Pow(a, k) => {
                if *k == 0 {
                    return Expr::int(0);
                }
                let da = a.diff_structural(v);
                let lower = if *k == 1 {
                    Expr::int(1)
                } else {
                    Expr::Pow(a.clone(), *k - 1)
                };
                Expr::Mul(
                    Box::new(Expr::Mul(Box::new(Expr::int(*k as i64)), Box::new(lower))),
                    Box::new(da),
                )
            }
            Expr::Sin(a) => Expr::Mul(
                Box::new(Expr::Cos(a.clone())),
                Box::new(a.diff_structural(v)),
            ),
            Expr::Cos(a) => Expr::Neg(Box::new(Expr::Mul(
                Box::new(Expr::Sin(a.clone())),
                Box::new(a.diff_structural(v)),
            ))),
            Expr::Exp(a) => Expr::Mul(
                Box::new(Expr::Exp(a.clone())),
                Box::new(a.diff_structural(v)),
            ),
        }
    }

    /// Canonical rational-function normal form.
    ///
    /// The result is a single fraction (or plain polynomial) with expanded
    /// monomials in a stable order; equal functions in the rational fragment
    /// normalize to the identical tree.  Fails only when a denominator is
    /// identically zero as a polynomial.
    pub fn normalize(&self) -> Result<Expr, ZeroDenominator> {
        normal::Fraction::from_expr(self).map(|f| f.to_expr())
    }

    /// Tri-state zero test with default settings ([`ZeroTest::default`]).
    pub fn is_zero(&self) -> Verdict {
        self.is_zero_with(&ZeroTest::default())
    }

    /// Tri-state zero test.  Exact (both directions) on the rational
    /// fragment; probabilistic `Zero` and sound `NonZero` otherwise; see
    /// [`ZeroTest`] for the sampling parameters.
    pub fn is_zero_with(&self, cfg: &ZeroTest) -> Verdict {
        zero::is_zero(self, cfg)
    }

    /// Substitutes expressions for variables (capture is not a concern:
    /// there are no binders).  Names missing from the map are left alone.
    pub fn substitute(&self, map: &BTreeMap<String, Expr>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(map))),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Expr::Pow(a, k) => Expr::Pow(Box::new(a.substitute(map)), *k),
            Expr::Sin(a) => Expr::Sin(Box::new(a.substitute(map))),
            Expr::Cos(a) => Expr::Cos(Box::new(a.substitute(map))),
            Expr::Exp(a) => Expr::Exp(Box::new(a.substitute(map))),
        }
    }

    /// Compiles the expression for fast repeated numerical evaluation with
    /// the given variable order.
    pub fn compile(&self, vars: &[String]) -> Result<CompiledExpr, EvalError> {
        CompiledExpr::compile(self, vars)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Const(c) if c.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "(")?;
            fmt::Display::fmt(self, f)?;
            write!(f, ")")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    // `to_f64` on Ratio<BigInt> handles magnitudes beyond f64 by saturating
    // to infinity, which is what we want for blow-up detection downstream.
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Expr {
    /// Precedence-aware printing.  Output of a canonical tree reparses to
    /// the identical tree; arbitrary trees reparse up to the parser's
    /// folding of signed rational literals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_child(f, 3)
            }
            Expr::Add(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " + ")?;
                b.fmt_child(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " - ")?;
                b.fmt_child(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "*")?;
                b.fmt_child(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "/")?;
                b.fmt_child(f, 3)
            }
            Expr::Pow(a, k) => {
                a.fmt_child(f, 5)?;
                write!(f, "^{k}")
            }
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    /// Panics if `rhs` is the constant zero; use `Expr::normalize` to detect
    /// denominators that merely simplify to zero.
    fn div(self, rhs: Expr) -> Expr {
        if matches!(&rhs, Expr::Const(c) if c.is_zero()) {
            panic!("constant zero denominator");
        }
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests;
