//! Canonical rational-function normal form.
//!
//! Every expression flattens to a single fraction `num/den` of multivariate
//! polynomials over *atoms*: the variables themselves plus opaque
//! transcendental subterms (`sin`, `cos`, `exp` applied to an already
//! canonical argument).  Polynomial arithmetic is exact rational, so the
//! normal form decides equality on the rational fragment outright:
//! `x*y - y*x` flattens to the zero polynomial.
//!
//! Canonical presentation: monomials in graded order (higher total degree
//! first, ties broken lexicographically with earlier atoms dominant), the
//! denominator scaled to integer coefficients with content one and positive
//! leading coefficient.  Three cheap value-preserving reductions keep
//! fractions small without a full polynomial gcd: additions over an
//! identical denominator share it, a monomial factor common to every term
//! of both numerator and denominator is cancelled, and a numerator that is
//! a scalar multiple of the denominator folds to that scalar (this is what
//! sends `sin(t)^2 + cos(t)^2` over itself to `1`).

use super::{Expr, ZeroDenominator};
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A multiplicative generator of the polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Atom {
    Var(String),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
}

impl Atom {
    fn to_expr(&self) -> Expr {
        match self {
            Atom::Var(v) => Expr::Var(v.clone()),
            Atom::Sin(a) => Expr::Sin(Box::new(a.clone())),
            Atom::Cos(a) => Expr::Cos(Box::new(a.clone())),
            Atom::Exp(a) => Expr::Exp(Box::new(a.clone())),
        }
    }

    fn is_var(&self) -> bool {
        matches!(self, Atom::Var(_))
    }
}

/// A product of atom powers; exponents are always ≥ 1 and atoms sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    fn unit() -> Self {
        Monomial(Vec::new())
    }

    fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Exact division by a monomial that divides `self`.
    fn div(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 == *a {
                debug_assert!(other.0[j].1 <= e, "inexact monomial division");
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((a.clone(), e));
            }
        }
        debug_assert_eq!(j, other.0.len(), "inexact monomial division");
        Monomial(out)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded order: total degree first; ties broken so that among equal
    /// degrees the monomial whose earliest atom has the larger exponent
    /// ranks higher (the usual graded-lexicographic order, e.g.
    /// `x^2 > x*y > y^2`).
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for ((a1, e1), (a2, e2)) in self.0.iter().zip(other.0.iter()) {
            match a1.cmp(a2) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match e1.cmp(e2) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
        Ordering::Equal
    }
}

/// Polynomial with exact rational coefficients; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::unit(), c);
        }
        Poly(m)
    }

    fn atom(a: Atom) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial::atom(a), Rational::one());
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                (*m == Monomial::unit()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when every atom in every monomial is a plain variable.
    fn is_variable_only(&self) -> bool {
        self.0
            .keys()
            .all(|m| m.0.iter().all(|(a, _)| a.is_var()))
    }

    fn add_term(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match map.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.0.clone();
        for (m, c) in &other.0 {
            Self::add_term(&mut out, m.clone(), c.clone());
        }
        Poly(out)
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                Self::add_term(&mut out, m1.mul(m2), c1 * c2);
            }
        }
        Poly(out)
    }

    fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Divides every coefficient by the nonzero scalar `c`.
    fn scale_div(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|(m, k)| (m.clone(), k / c)).collect())
    }

    /// The coefficient of the largest monomial in the graded order.
    fn leading_coefficient(&self) -> Option<&Rational> {
        self.0.iter().next_back().map(|(_, c)| c)
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients; `None` for the zero polynomial.
    fn content(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        let mut gcd_num = BigInt::zero();
        let mut lcm_den = BigInt::one();
        for c in self.0.values() {
            gcd_num = gcd_num.gcd(&c.numer().abs());
            lcm_den = lcm_den.lcm(c.denom());
        }
        Some(Rational::new(gcd_num, lcm_den))
    }

    /// Largest monomial dividing every term, or `None` for the zero
    /// polynomial.
    fn monomial_content(&self) -> Option<Monomial> {
        let mut iter = self.0.keys();
        let mut acc: Vec<(Atom, u32)> = iter.next()?.0.clone();
        for m in iter {
            let mut next = Vec::with_capacity(acc.len());
            let mut j = 0;
            for (a, e) in &acc {
                while j < m.0.len() && m.0[j].0 < *a {
                    j += 1;
                }
                if j < m.0.len() && m.0[j].0 == *a {
                    next.push((a.clone(), (*e).min(m.0[j].1)));
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        Some(Monomial(acc))
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly(self
            .0
            .iter()
            .map(|(k, c)| (k.div(m), c.clone()))
            .collect())
    }

    /// Builds the canonical expression tree: terms in descending graded
    /// order, each a left-associated product `coeff * atom^e * …`, joined
    /// with `+`/`-` according to the coefficient sign.
    fn to_expr(&self) -> Expr {
        let mut acc: Option<Expr> = None;
        for (m, c) in self.0.iter().rev() {
            match acc {
                None => acc = Some(Self::leading_term(m, c)),
                Some(a) => {
                    let t = Self::unsigned_term(m, &c.abs());
                    acc = Some(if c.is_negative() {
                        Expr::Sub(Box::new(a), Box::new(t))
                    } else {
                        Expr::Add(Box::new(a), Box::new(t))
                    });
                }
            }
        }
        acc.unwrap_or_else(|| Expr::int(0))
    }

    /// First term of a sum: the sign lives inside the leading constant, or
    /// on the first factor when the coefficient is ±1.
    fn leading_term(m: &Monomial, c: &Rational) -> Expr {
        if m.0.is_empty() {
            return Expr::Const(c.clone());
        }
        if c.abs().is_one() {
            Self::factor_chain(m, None, c.is_negative())
        } else {
            Self::factor_chain(m, Some(Expr::Const(c.clone())), false)
        }
    }

    /// Later term of a sum; the caller has already taken `|c|`.
    fn unsigned_term(m: &Monomial, c_abs: &Rational) -> Expr {
        if m.0.is_empty() {
            return Expr::Const(c_abs.clone());
        }
        if c_abs.is_one() {
            Self::factor_chain(m, None, false)
        } else {
            Self::factor_chain(m, Some(Expr::Const(c_abs.clone())), false)
        }
    }

    fn factor_chain(m: &Monomial, lead: Option<Expr>, negate_first: bool) -> Expr {
        let mut acc = lead;
        for (a, e) in &m.0 {
            let base = a.to_expr();
            let mut factor = if *e == 1 { base } else { base.pow(*e) };
            if acc.is_none() && negate_first {
                factor = Expr::Neg(Box::new(factor));
            }
            acc = Some(match acc {
                None => factor,
                Some(prev) => Expr::Mul(Box::new(prev), Box::new(factor)),
            });
        }
        acc.expect("monomial has at least one factor")
    }
}

/// A canonical fraction of atom polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fraction {
    num: Poly,
    den: Poly,
}

impl Fraction {
    /// Restores the canonical invariants after an arithmetic step.
    fn canonical(num: Poly, den: Poly) -> Fraction {
        debug_assert!(!den.is_zero(), "fraction with zero denominator");
        if num.is_zero() {
            return Fraction {
                num,
                den: Poly::one(),
            };
        }
        let (mut num, mut den) = (num, den);
        // Cancel a common monomial factor.
        if let (Some(mn), Some(md)) = (num.monomial_content(), den.monomial_content()) {
            let mut common: Vec<(Atom, u32)> = Vec::new();
            let mut j = 0;
            for (a, e) in &mn.0 {
                while j < md.0.len() && md.0[j].0 < *a {
                    j += 1;
                }
                if j < md.0.len() && md.0[j].0 == *a {
                    common.push((a.clone(), (*e).min(md.0[j].1)));
                }
            }
            let common = Monomial(common);
            if !common.0.is_empty() {
                num = num.div_monomial(&common);
                den = den.div_monomial(&common);
            }
        }
        // Fold a numerator proportional to the denominator into a scalar.
        if let Some(ratio) = proportionality(&num, &den) {
            return Fraction {
                num: Poly::constant(ratio),
                den: Poly::one(),
            };
        }
        // The same fold up to a monomial factor: num = m · λ · den becomes
        // the polynomial λ·m.  (The monomial cancellation above only strips
        // factors shared with the denominator; this catches e.g.
        // (π·s² + π·c²)/(s² + c²) = π.)
        if let Some(content) = num.monomial_content() {
            if !content.0.is_empty() {
                if let Some(ratio) = proportionality(&num.div_monomial(&content), &den) {
                    return Fraction {
                        num: Poly([(content, ratio)].into_iter().collect()),
                        den: Poly::one(),
                    };
                }
            }
        }
        // Scale the denominator to integer content-one coefficients with a
        // positive leading coefficient.
        let mut c = den.content().expect("nonzero denominator has content");
        if den
            .leading_coefficient()
            .expect("nonzero denominator")
            .is_negative()
        {
            c = -c;
        }
        Fraction {
            num: num.scale_div(&c),
            den: den.scale_div(&c),
        }
    }

    pub fn from_expr(e: &Expr) -> Result<Fraction, ZeroDenominator> {
        Ok(match e {
            Expr::Const(c) => Fraction::canonical(Poly::constant(c.clone()), Poly::one()),
            Expr::Var(v) => {
                Fraction::canonical(Poly::atom(Atom::Var(v.clone())), Poly::one())
            }
            // Sums and products are folded over their flattened spines:
            // canonical polynomials rebuild as sums nested once per term,
            // so recursing into each `+` node would make the stack depth
            // proportional to the term count.
            Expr::Neg(..) | Expr::Add(..) | Expr::Sub(..) => Fraction::fold_sum(e)?,
            Expr::Mul(..) => Fraction::fold_product(e)?,
            Expr::Div(a, b) => {
                let (fa, fb) = (Fraction::from_expr(a)?, Fraction::from_expr(b)?);
                if fb.num.is_zero() {
                    return Err(ZeroDenominator(b.to_string()));
                }
                Fraction::canonical(fa.num.mul(&fb.den), fa.den.mul(&fb.num))
            }
            Expr::Pow(a, k) => {
                let f = Fraction::from_expr(a)?;
                Fraction::canonical(f.num.pow(*k), f.den.pow(*k))
            }
            Expr::Sin(a) => transcendental(a, Atom::Sin, Rational::zero())?,
            Expr::Cos(a) => transcendental(a, Atom::Cos, Rational::one())?,
            Expr::Exp(a) => transcendental(a, Atom::Exp, Rational::one())?,
        })
    }

    /// Converts a `+`/`-`/unary-minus spine without recursing through it:
    /// the signed leaf terms are listed with an explicit work stack, then
    /// combined left to right.
    fn fold_sum(root: &Expr) -> Result<Fraction, ZeroDenominator> {
        let mut terms: Vec<(&Expr, bool)> = Vec::new();
        let mut todo: Vec<(&Expr, bool)> = vec![(root, false)];
        while let Some((e, negated)) = todo.pop() {
            match e {
                Expr::Add(a, b) => {
                    todo.push((b, negated));
                    todo.push((a, negated));
                }
                Expr::Sub(a, b) => {
                    todo.push((b, !negated));
                    todo.push((a, negated));
                }
                Expr::Neg(a) => todo.push((a, !negated)),
                leaf => terms.push((leaf, negated)),
            }
        }
        let mut acc: Option<Fraction> = None;
        for (leaf, negated) in terms {
            let mut f = Fraction::from_expr(leaf)?;
            if negated {
                f = Fraction::canonical(f.num.neg(), f.den);
            }
            acc = Some(match acc {
                None => f,
                Some(a) if a.den == f.den => {
                    Fraction::canonical(a.num.add(&f.num), a.den)
                }
                Some(a) => Fraction::canonical(
                    a.num.mul(&f.den).add(&f.num.mul(&a.den)),
                    a.den.mul(&f.den),
                ),
            });
        }
        Ok(acc.expect("a sum spine has at least one leaf"))
    }

    /// The multiplicative counterpart of [`Fraction::fold_sum`].
    fn fold_product(root: &Expr) -> Result<Fraction, ZeroDenominator> {
        let mut factors: Vec<&Expr> = Vec::new();
        let mut todo: Vec<&Expr> = vec![root];
        while let Some(e) = todo.pop() {
            match e {
                Expr::Mul(a, b) => {
                    todo.push(b);
                    todo.push(a);
                }
                leaf => factors.push(leaf),
            }
        }
        let mut acc: Option<Fraction> = None;
        for leaf in factors {
            let f = Fraction::from_expr(leaf)?;
            acc = Some(match acc {
                None => f,
                Some(a) => Fraction::canonical(a.num.mul(&f.num), a.den.mul(&f.den)),
            });
        }
        Ok(acc.expect("a product spine has at least one leaf"))
    }

    pub fn num_is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when neither side contains a transcendental atom, i.e. the
    /// fraction lies in the decidable rational fragment.
    pub fn is_rational_fragment(&self) -> bool {
        self.num.is_variable_only() && self.den.is_variable_only()
    }

    /// Canonical numerator and denominator as expression trees.
    pub fn parts(&self) -> (Expr, Expr) {
        (self.num.to_expr(), self.den.to_expr())
    }

    pub fn to_expr(&self) -> Expr {
        if self.num.is_zero() {
            return Expr::int(0);
        }
        let n = self.num.to_expr();
        if self.den.is_one() {
            n
        } else {
            Expr::Div(Box::new(n), Box::new(self.den.to_expr()))
        }
    }
}

/// `Some(λ)` when `num = λ · den` as polynomials.
fn proportionality(num: &Poly, den: &Poly) -> Option<Rational> {
    if num.0.len() != den.0.len() {
        return None;
    }
    let mut ratio: Option<Rational> = None;
    for ((mn, cn), (md, cd)) in num.0.iter().zip(den.0.iter()) {
        if mn != md {
            return None;
        }
        let r = cn / cd;
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev == r => {}
            Some(_) => return None,
        }
    }
    ratio
}

/// Common handling of `sin`/`cos`/`exp`: canonicalize the argument, fold a
/// zero argument to the function's value there, and otherwise mint an
/// opaque atom.
fn transcendental(
    arg: &Expr,
    make: fn(Expr) -> Atom,
    value_at_zero: Rational,
) -> Result<Fraction, ZeroDenominator> {
    let canon = Fraction::from_expr(arg)?.to_expr();
    if matches!(&canon, Expr::Const(c) if c.is_zero()) {
        return Ok(Fraction::canonical(
            Poly::constant(value_at_zero),
            Poly::one(),
        ));
    }
    Ok(Fraction::canonical(Poly::atom(make(canon)), Poly::one()))
}

/// Exact zero test in the polynomial model; errors only on an identically
/// zero denominator.
pub(crate) fn exact_zero(e: &Expr) -> Result<bool, ZeroDenominator> {
    Ok(Fraction::from_expr(e)?.num_is_zero())
}
