//! Differential forms with symbolic coefficients.
//!
//! A [`DifferentialForm`] of degree `k` on coordinates `x_1, …, x_n` is a
//! finite sum `Σ a_I dx_I` where `I` ranges over strictly increasing
//! multi-indices of length `k` and each coefficient is an [`Expr`] in the
//! coordinates.  Coefficients are kept in canonical normal form and exact
//! zeros are dropped, so a form whose coefficients cancel in the rational
//! fragment *is* the zero form structurally.
//!
//! Operations: wedge product (with the sign of the merge permutation),
//! exterior derivative, pullback along a [`SmoothMap`], closedness as a
//! tri-state verdict, and checking a proposed primitive
//! ([`DifferentialForm::check_exact_witness`]).

use crate::expr::{exact_zero, Expr, Verdict, ZeroDenominator, ZeroTest, PI_NAME};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Errors from form construction and algebra.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("`pi` is reserved for the circle constant and cannot be a coordinate")]
    ReservedCoordinate,
    #[error("multi-index entry {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("multi-index {0:?} is not strictly increasing")]
    NonIncreasingIndex(Vec<usize>),
    #[error("multi-index of length {found} in a form of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("coefficient uses `{var}` which is not a coordinate")]
    UnknownVariable { var: String },
    #[error("coefficient does not normalize: {0}")]
    BadCoefficient(#[from] ZeroDenominator),
    #[error("operands live on different coordinates or degrees")]
    Mismatch,
    #[error("map has {components} components for {targets} target coordinates")]
    ArityMismatch { components: usize, targets: usize },
    #[error("composition is singular: {0}")]
    SingularComposition(String),
}

/// A strictly increasing list of 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Validates strict increase and positivity (range against the ambient
    /// dimension is the form constructor's job).
    pub fn new(indices: Vec<usize>) -> Result<Self, FormError> {
        if indices.contains(&0) {
            return Err(FormError::IndexOutOfRange { index: 0, n: 0 });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormError::NonIncreasingIndex(indices));
        }
        Ok(MultiIndex(indices))
    }

    /// The empty index of a 0-form.
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Merges two disjoint indices, counting the inversions of the
    /// interleaving; `None` when an index repeats (the wedge vanishes).
    /// The boolean is true when the permutation is odd.
    fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // b[j] moves left past the a-factors not yet emitted.
                    inversions += a.len() - i;
                    out.push(b[j]);
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((MultiIndex(out), inversions % 2 == 1))
    }
}

/// A smooth map given by component expressions: source coordinates to
/// target coordinates.  Components are stored in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    source: Vec<String>,
    target: Vec<String>,
    components: Vec<Expr>,
}

fn check_coordinates(coords: &[String]) -> Result<(), FormError> {
    let mut seen = BTreeSet::new();
    for c in coords {
        if c == PI_NAME {
            return Err(FormError::ReservedCoordinate);
        }
        if !seen.insert(c) {
            return Err(FormError::DuplicateCoordinate(c.clone()));
        }
    }
    Ok(())
}

fn check_expr_vars(e: &Expr, coords: &[String]) -> Result<(), FormError> {
    for v in e.free_vars() {
        if v != PI_NAME && !coords.contains(&v) {
            return Err(FormError::UnknownVariable { var: v });
        }
    }
    Ok(())
}

impl SmoothMap {
    pub fn new(
        source: Vec<String>,
        target: Vec<String>,
        components: Vec<Expr>,
    ) -> Result<Self, FormError> {
        check_coordinates(&source)?;
        check_coordinates(&target)?;
        if components.len() != target.len() {
            return Err(FormError::ArityMismatch {
                components: components.len(),
                targets: target.len(),
            });
        }
        let components = components
            .into_iter()
            .map(|c| {
                check_expr_vars(&c, &source)?;
                c.normalize().map_err(FormError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SmoothMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(coords: Vec<String>) -> Result<Self, FormError> {
        let components = coords.iter().map(|c| Expr::var(c.clone())).collect();
        SmoothMap::new(coords.clone(), coords, components)
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap, FormError> {
        if inner.target != self.source {
            return Err(FormError::Mismatch);
        }
        let sub: BTreeMap<String, Expr> = self
            .source
            .iter()
            .cloned()
            .zip(inner.components.iter().cloned())
            .collect();
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&sub))
            .collect();
        SmoothMap::new(inner.source.clone(), self.target.clone(), components)
    }

    /// Pullback `f*(Σ a_I dy_I) = Σ (a_I ∘ f) df_{i_1} ∧ … ∧ df_{i_q}`.
    pub fn pullback(&self, w: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if w.coords != self.target {
            return Err(FormError::Mismatch);
        }
        let sub: BTreeMap<String, Expr> = self
            .target
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect();
        // Differentials of the components as 1-forms on the source.
        let dfs: Vec<DifferentialForm> = self
            .components
            .iter()
            .map(|c| {
                DifferentialForm::function(self.source.clone(), c.clone())
                    .expect("validated components")
                    .d()
            })
            .collect();
        let mut acc = DifferentialForm::zero(self.source.clone(), w.degree)?;
        for (idx, coeff) in &w.terms {
            let composed = coeff.substitute(&sub);
            let composed = composed
                .normalize()
                .map_err(|e| FormError::SingularComposition(e.to_string()))?;
            let mut term = DifferentialForm::function(self.source.clone(), composed)?;
            for &i in idx.indices() {
                term = term.wedge(&dfs[i - 1])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// A differential form of homogeneous degree with canonical coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    coords: Vec<String>,
    degree: usize,
    terms: BTreeMap<MultiIndex, Expr>,
}

impl DifferentialForm {
    /// The zero form of the given degree.
    pub fn zero(coords: Vec<String>, degree: usize) -> Result<Self, FormError> {
        check_coordinates(&coords)?;
        Ok(DifferentialForm {
            coords,
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// A 0-form from a scalar expression.
    pub fn function(coords: Vec<String>, value: Expr) -> Result<Self, FormError> {
        Self::new(coords, 0, vec![(MultiIndex::empty(), value)])
    }

    /// Builds a form, validating indices against the coordinates and the
    /// declared degree, normalizing coefficients, combining duplicate
    /// indices and dropping exact zeros.  A degree above the ambient
    /// dimension admits no valid multi-index, so such a form is zero.
    pub fn new(
        coords: Vec<String>,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Expr)>,
    ) -> Result<Self, FormError> {
        check_coordinates(&coords)?;
        let n = coords.len();
        let mut map: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        for (idx, coeff) in terms {
            if idx.degree() != degree {
                return Err(FormError::DegreeMismatch {
                    expected: degree,
                    found: idx.degree(),
                });
            }
            if let Some(&bad) = idx.indices().iter().find(|&&i| i > n) {
                return Err(FormError::IndexOutOfRange { index: bad, n });
            }
            check_expr_vars(&coeff, &coords)?;
            add_term(&mut map, idx, coeff);
        }
        let terms = normalize_terms(map)?;
        Ok(DifferentialForm {
            coords,
            degree,
            terms,
        })
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.terms.iter()
    }

    /// True when every coefficient cancelled exactly.
    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if self.coords != other.coords || self.degree != other.degree {
            return Err(FormError::Mismatch);
        }
        let mut map = self.terms.clone();
        for (idx, c) in &other.terms {
            add_term(&mut map, idx.clone(), c.clone());
        }
        Ok(DifferentialForm {
            coords: self.coords.clone(),
            degree: self.degree,
            terms: normalize_terms(map)?,
        })
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if self.coords != other.coords || self.degree != other.degree {
            return Err(FormError::Mismatch);
        }
        let mut map = self.terms.clone();
        for (idx, c) in &other.terms {
            add_term(&mut map, idx.clone(), Expr::Neg(Box::new(c.clone())));
        }
        Ok(DifferentialForm {
            coords: self.coords.clone(),
            degree: self.degree,
            terms: normalize_terms(map)?,
        })
    }

    /// Multiplies every coefficient by a scalar expression in the same
    /// coordinates.
    pub fn scale(&self, factor: &Expr) -> Result<DifferentialForm, FormError> {
        check_expr_vars(factor, &self.coords)?;
        let mut map = BTreeMap::new();
        for (idx, c) in &self.terms {
            add_term(
                &mut map,
                idx.clone(),
                Expr::Mul(Box::new(factor.clone()), Box::new(c.clone())),
            );
        }
        Ok(DifferentialForm {
            coords: self.coords.clone(),
            degree: self.degree,
            terms: normalize_terms(map)?,
        })
    }

    /// Wedge product.  Index merges carry the permutation sign; a repeated
    /// index kills the term, so a result of degree above the ambient
    /// dimension is automatically zero.
    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if self.coords != other.coords {
            return Err(FormError::Mismatch);
        }
        let mut map: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                let Some((idx, odd)) = ia.merge(ib) else {
                    continue;
                };
                let mut prod = Expr::Mul(Box::new(ca.clone()), Box::new(cb.clone()));
                if odd {
                    prod = Expr::Neg(Box::new(prod));
                }
                add_term(&mut map, idx, prod);
            }
        }
        Ok(DifferentialForm {
            coords: self.coords.clone(),
            degree: self.degree + other.degree,
            terms: normalize_terms(map)?,
        })
    }

    /// Exterior derivative: `d(Σ a_I dx_I) = Σ_i ∂a_I/∂x_i dx_i ∧ dx_I`.
    pub fn d(&self) -> DifferentialForm {
        let mut map: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        for (idx, coeff) in &self.terms {
            for (pos, name) in self.coords.iter().enumerate() {
                let i = pos + 1;
                if idx.indices().contains(&i) {
                    continue;
                }
                let partial = coeff.diff(name);
                if matches!(exact_zero(&partial), Ok(true)) {
                    continue;
                }
                let single = MultiIndex(vec![i]);
                let (merged, odd) = single
                    .merge(idx)
                    .expect("index i was checked not to occur in idx");
                let term = if odd {
                    Expr::Neg(Box::new(partial))
                } else {
                    partial
                };
                add_term(&mut map, merged, term);
            }
        }
        let terms = normalize_terms(map).expect("derivatives of normalizable coefficients");
        DifferentialForm {
            coords: self.coords.clone(),
            degree: self.degree + 1,
            terms,
        }
    }

    /// Closedness of the form as a tri-state verdict on `d self`.
    pub fn is_closed(&self) -> Verdict {
        self.is_closed_with(&ZeroTest::default())
    }

    pub fn is_closed_with(&self, cfg: &ZeroTest) -> Verdict {
        let dw = self.d();
        dw.terms
            .values()
            .map(|c| c.is_zero_with(cfg))
            .fold(Verdict::Zero, Verdict::and)
    }

    /// Does `d tau = self`?  The candidate must be one degree lower on the
    /// same coordinates; the verdict aggregates the coefficient zero tests
    /// of `self - d tau`.
    pub fn check_exact_witness(&self, tau: &DifferentialForm) -> Result<Verdict, FormError> {
        self.check_exact_witness_with(tau, &ZeroTest::default())
    }

    pub fn check_exact_witness_with(
        &self,
        tau: &DifferentialForm,
        cfg: &ZeroTest,
    ) -> Result<Verdict, FormError> {
        if tau.coords != self.coords || tau.degree + 1 != self.degree {
            return Err(FormError::Mismatch);
        }
        let residual = self.sub(&tau.d())?;
        Ok(residual
            .terms
            .values()
            .map(|c| c.is_zero_with(cfg))
            .fold(Verdict::Zero, Verdict::and))
    }
}

/// The angular 1-form on the punctured plane, in coordinates `x, y`:
///
/// ```text
/// (−y/(x² + y²)) dx + (x/(x² + y²)) dy
/// ```
///
/// It is closed (its derivative cancels exactly) but not exact — its
/// integral over a loop counts `2π` per turn around the origin, which is
/// what makes it the standard witness that cohomology sees the puncture.
pub fn angular_form() -> DifferentialForm {
    let coords = vec!["x".to_string(), "y".to_string()];
    let dx = MultiIndex::new(vec![1]).expect("valid index");
    let dy = MultiIndex::new(vec![2]).expect("valid index");
    let denom = Expr::pow(Expr::var("x"), 2) + Expr::pow(Expr::var("y"), 2);
    DifferentialForm::new(
        coords,
        1,
        vec![
            (dx, -Expr::var("y") / denom.clone()),
            (dy, Expr::var("x") / denom),
        ],
    )
    .expect("coefficients are well-formed")
}

fn add_term(map: &mut BTreeMap<MultiIndex, Expr>, idx: MultiIndex, coeff: Expr) {
    match map.entry(idx) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = Expr::Add(Box::new(e.get().clone()), Box::new(coeff));
            *e.get_mut() = sum;
        }
    }
}

/// Normalizes every coefficient and drops the exact zeros.
fn normalize_terms(
    map: BTreeMap<MultiIndex, Expr>,
) -> Result<BTreeMap<MultiIndex, Expr>, ZeroDenominator> {
    let mut out = BTreeMap::new();
    for (idx, coeff) in map {
        let n = coeff.normalize()?;
        if !matches!(&n, Expr::Const(c) if num_traits::Zero::is_zero(c)) {
            out.insert(idx, n);
        }
    }
    Ok(out)
}

impl fmt::Display for DifferentialForm {
    /// Human-readable rendering, e.g. `(2*x) dx∧dy`; the zero form prints
    /// as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.degree() == 0 {
                write!(f, "{coeff}")?;
            } else {
                let basis: Vec<String> = idx
                    .indices()
                    .iter()
                    .map(|&i| format!("d{}", self.coords[i - 1]))
                    .collect();
                write!(f, "({coeff}) {}", basis.join("∧"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    /// The angular 1-form on the punctured plane, via the parser as an
    /// independent spelling of the library constructor.
    pub(crate) fn angular() -> DifferentialForm {
        let parsed = DifferentialForm::new(
            xy(),
            1,
            vec![
                (idx(&[1]), e("-y/(x^2 + y^2)")),
                (idx(&[2]), e("x/(x^2 + y^2)")),
            ],
        )
        .unwrap();
        assert_eq!(parsed, angular_form());
        parsed
    }

    #[test]
    fn construction_validates() {
        assert!(MultiIndex::new(vec![2, 1]).is_err());
        assert!(MultiIndex::new(vec![1, 1]).is_err());
        assert!(DifferentialForm::new(xy(), 1, vec![(idx(&[3]), e("1"))]).is_err());
        assert!(DifferentialForm::new(xy(), 1, vec![(idx(&[1]), e("z"))]).is_err());
        assert!(DifferentialForm::zero(vec!["x".into(), "x".into()], 1).is_err());
        assert!(DifferentialForm::zero(vec!["pi".into()], 0).is_err());
        // Degree above the ambient dimension is the zero form.
        let w = DifferentialForm::zero(xy(), 3).unwrap();
        assert!(w.is_exactly_zero());
    }

    #[test]
    fn wedge_signs_and_squares() {
        let dx = DifferentialForm::new(xy(), 1, vec![(idx(&[1]), e("1"))]).unwrap();
        let dy = DifferentialForm::new(xy(), 1, vec![(idx(&[2]), e("1"))]).unwrap();
        let dxdy = dx.wedge(&dy).unwrap();
        assert_eq!(dxdy.terms[&idx(&[1, 2])], e("1"));
        let dydx = dy.wedge(&dx).unwrap();
        assert_eq!(dydx.terms[&idx(&[1, 2])], e("-1"));
        assert!(dx.wedge(&dx).unwrap().is_exactly_zero());
        // Degree overflow: a 1-form wedge a 2-form on the plane.
        assert!(dx.wedge(&dxdy).unwrap().is_exactly_zero());
    }

    #[test]
    fn exterior_derivative_worked_values() {
        // d(x dy) = dx∧dy, d(y dx) = -dx∧dy.
        let xdy = DifferentialForm::new(xy(), 1, vec![(idx(&[2]), e("x"))]).unwrap();
        assert_eq!(xdy.d().terms[&idx(&[1, 2])], e("1"));
        let ydx = DifferentialForm::new(xy(), 1, vec![(idx(&[1]), e("y"))]).unwrap();
        assert_eq!(ydx.d().terms[&idx(&[1, 2])], e("-1"));
        // d of a function: gradient coefficients.
        let f = DifferentialForm::function(xy(), e("x^2*y")).unwrap();
        let df = f.d();
        assert_eq!(df.terms[&idx(&[1])], e("2*x*y"));
        assert_eq!(df.terms[&idx(&[2])], e("x^2"));
    }

    #[test]
    fn angular_form_is_closed_exactly() {
        // The two partial derivatives cancel in the rational fragment, so
        // d gives the structurally zero 2-form.
        let w = angular();
        assert!(w.d().is_exactly_zero());
        assert_eq!(w.is_closed(), Verdict::Zero);
    }

    #[test]
    fn d_squared_vanishes_on_worked_forms() {
        let w = DifferentialForm::new(
            xy(),
            1,
            vec![(idx(&[1]), e("x^3 - y")), (idx(&[2]), e("x*y^2"))],
        )
        .unwrap();
        assert!(w.d().d().is_exactly_zero());
        let f = DifferentialForm::function(xy(), e("(x + y)/(1 + x^2)")).unwrap();
        assert!(f.d().d().is_exactly_zero());
    }

    #[test]
    fn pullback_of_angular_form_along_circle() {
        // t ↦ (cos t, sin t) pulls the angular form back to dt: the
        // coefficient normalizes to 1 via the Pythagorean fold.
        let circle = SmoothMap::new(
            vec!["t".into()],
            xy(),
            vec![e("cos(t)"), e("sin(t)")],
        )
        .unwrap();
        let p = circle.pullback(&angular()).unwrap();
        assert_eq!(p.terms[&idx(&[1])], e("1"));
        let minus_one = (p.terms[&idx(&[1])].clone() - e("1")).is_zero();
        assert_eq!(minus_one, Verdict::Zero);
    }

    #[test]
    fn pullback_along_identity_is_identity() {
        let w = angular();
        let id = SmoothMap::identity(xy()).unwrap();
        assert_eq!(id.pullback(&w).unwrap(), w);
    }

    #[test]
    fn pullback_commutes_with_d_worked_case() {
        // Naturality on a polynomial map.
        let f = SmoothMap::new(
            vec!["u".into(), "v".into()],
            xy(),
            vec![e("u^2 - v"), e("u*v")],
        )
        .unwrap();
        let w = DifferentialForm::new(xy(), 1, vec![(idx(&[1]), e("x*y")), (idx(&[2]), e("y"))])
            .unwrap();
        let lhs = f.pullback(&w.d()).unwrap();
        let rhs = f.pullback(&w).unwrap().d();
        assert!(lhs.sub(&rhs).unwrap().is_exactly_zero());
    }

    #[test]
    fn exact_witness_check() {
        // x dy + y dx = d(xy).
        let w = DifferentialForm::new(xy(), 1, vec![(idx(&[1]), e("y")), (idx(&[2]), e("x"))])
            .unwrap();
        let tau = DifferentialForm::function(xy(), e("x*y")).unwrap();
        assert_eq!(w.check_exact_witness(&tau).unwrap(), Verdict::Zero);
        let wrong = DifferentialForm::function(xy(), e("x*y + x")).unwrap();
        assert_eq!(w.check_exact_witness(&wrong).unwrap(), Verdict::NonZero);
        // Degree mismatch is an error, not a verdict.
        assert!(w.check_exact_witness(&w).is_err());
    }

    #[test]
    fn singular_composition_is_reported() {
        // Pull 1/x back along the constant map t ↦ 0.
        let w = DifferentialForm::function(vec!["x".into()], e("1/x")).unwrap();
        let collapse = SmoothMap::new(vec!["t".into()], vec!["x".into()], vec![e("t - t")])
            .unwrap();
        assert!(matches!(
            collapse.pullback(&w),
            Err(FormError::SingularComposition(_))
        ));
    }
}
