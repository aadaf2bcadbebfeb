//! Numerical integration of differential forms over smooth singular
//! chains: periods, boundaries, Stokes residuals and period matrices.
//!
//! A [`SmoothSimplex`] is a smooth map from the standard simplex
//! (parametrized by `t1, …, tk`) into a coordinate space; a
//! [`SingularChain`] is a formal rational combination of such simplices.
//! Integration pulls the form back symbolically — exact cancellation
//! happens *before* any floating point — and hands the resulting scalar
//! to the adaptive simplex quadrature in [`quadrature`].
//!
//! Boundaries are computed symbolically too, as alternating sums of face
//! restrictions, with cancellation by canonical printed form, so
//! `∂∂ = 0` holds on the nose for affine chains.  Where cancellation is
//! not syntactic (a loop whose endpoints are `cos(2·pi)` and `1`), cycle
//! verification falls back to clustering boundary points numerically and
//! summing their exact rational coefficients.

pub mod quadrature;

pub use quadrature::SimplexRule;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::expr::{rational_to_f64, EvalError, EvalPoint, Expr, Verdict, ZeroTest};
use crate::forms::{DifferentialForm, FormError, MultiIndex, SmoothMap};
use crate::Rational;

/// Errors from the integration layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("a {form}-form cannot be integrated over a {simplex}-dimensional simplex")]
    DegreeMismatch { form: usize, simplex: usize },
    #[error("chains can only combine simplices of one degree into one target space")]
    ChainMismatch,
    #[error("simplex parameters must be named t1..tk, found {found:?}")]
    ParameterNames { found: Vec<String> },
    #[error("an affine simplex needs at least one vertex, all of the target dimension")]
    BadVertices,
    #[error("integrand is not finite at {point:?}")]
    NonFiniteValue { point: Vec<f64> },
    #[error(
        "quadrature stalled at {best} (successive levels differ by {achieved:e}, \
         requested {requested:e})"
    )]
    ToleranceNotMet {
        best: f64,
        achieved: f64,
        requested: f64,
    },
    #[error("form {form} is not closed")]
    NotClosed { form: usize },
    #[error("could not certify that form {form} is closed")]
    ClosednessUnknown { form: usize },
    #[error("chain {cycle} is not a cycle: its boundary does not cancel")]
    NotACycle { cycle: usize },
}

/// Tolerances and budgets for the adaptive quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute agreement required between successive refinement levels.
    pub tolerance: f64,
    /// Grundmann–Möller index `s`; the rule is exact through polynomial
    /// degree `2s + 1` on every subdivision cell.
    pub degree: usize,
    /// Maximum number of doublings of the subdivision.
    pub max_refinements: u32,
    /// Hard cap on integrand evaluations per refinement level.
    pub max_evaluations: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            tolerance: 1e-9,
            degree: 2,
            max_refinements: 12,
            max_evaluations: 4_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// The canonical parameter names `t1..tk` of the standard `k`-simplex.
pub fn parameter_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("t{i}")).collect()
}

/// A smooth map from the standard simplex `Δ_k = {t ≥ 0, Σt ≤ 1}`
/// (coordinates `t1..tk`) into a coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothSimplex {
    map: SmoothMap,
}

impl SmoothSimplex {
    /// Wraps a map whose source coordinates are exactly `t1..tk`.
    pub fn new(map: SmoothMap) -> Result<Self, PeriodError> {
        if map.source() != parameter_names(map.source().len()) {
            return Err(PeriodError::ParameterNames {
                found: map.source().to_vec(),
            });
        }
        Ok(SmoothSimplex { map })
    }

    /// A `dim`-simplex into the space with the given coordinates, one
    /// component expression (in `t1..tdim`) per coordinate.
    pub fn from_components(
        dim: usize,
        target: Vec<String>,
        components: Vec<Expr>,
    ) -> Result<Self, PeriodError> {
        let map = SmoothMap::new(parameter_names(dim), target, components)?;
        Ok(SmoothSimplex { map })
    }

    /// The affine simplex through `vertices[0], …, vertices[k]` (each a
    /// point with one rational coordinate per target name):
    /// `t ↦ v_0 + Σ_j t_j (v_j − v_0)`.
    pub fn affine(target: Vec<String>, vertices: &[Vec<Rational>]) -> Result<Self, PeriodError> {
        if vertices.is_empty() || vertices.iter().any(|v| v.len() != target.len()) {
            return Err(PeriodError::BadVertices);
        }
        let dim = vertices.len() - 1;
        let components = (0..target.len())
            .map(|c| {
                let mut e = Expr::Const(vertices[0][c].clone());
                for j in 1..=dim {
                    let slope = &vertices[j][c] - &vertices[0][c];
                    if !slope.is_zero() {
                        e = e + Expr::Const(slope) * Expr::var(format!("t{j}"));
                    }
                }
                e
            })
            .collect();
        Self::from_components(dim, target, components)
    }

    pub fn dim(&self) -> usize {
        self.map.source().len()
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn target(&self) -> &[String] {
        self.map.target()
    }

    /// The `j`-th boundary face (`0 ≤ j ≤ k`): the restriction of the
    /// simplex to the face of `Δ_k` omitting vertex `j`, reparametrized
    /// over `Δ_{k−1}`.  Fails if a coefficient becomes singular on the
    /// face.
    pub fn face(&self, j: usize) -> Result<SmoothSimplex, PeriodError> {
        let k = self.dim();
        assert!(k >= 1 && j <= k, "face index out of range");
        // Vertices of Δ_k: e_0 = 0, e_i = unit t_i.  Keep all but the
        // j-th and parametrize their span affinely by the new t1..t(k−1).
        let kept: Vec<usize> = (0..=k).filter(|&v| v != j).collect();
        let coordinate = |vertex: usize, i: usize| -> i64 {
            // i-th old coordinate of the given Δ_k vertex
            if vertex == i {
                1
            } else {
                0
            }
        };
        let substitution: BTreeMap<String, Expr> = (1..=k)
            .map(|i| {
                let mut e = Expr::int(coordinate(kept[0], i));
                for (new_var, &v) in kept.iter().enumerate().skip(1) {
                    let slope = coordinate(v, i) - coordinate(kept[0], i);
                    if slope != 0 {
                        e = e + Expr::int(slope) * Expr::var(format!("t{new_var}"));
                    }
                }
                (format!("t{i}"), e)
            })
            .collect();
        let components = self
            .map
            .components()
            .iter()
            .map(|c| c.substitute(&substitution))
            .collect();
        let map = SmoothMap::new(
            parameter_names(k - 1),
            self.map.target().to_vec(),
            components,
        )?;
        Ok(SmoothSimplex { map })
    }

    /// Canonical fingerprint used for exact cancellation in chains: the
    /// printed normal forms of the components.
    fn key(&self) -> Vec<String> {
        self.map.components().iter().map(|c| c.to_string()).collect()
    }

    /// Image of one parameter point, numerically.
    fn image(&self, t: &[f64]) -> Result<Vec<f64>, PeriodError> {
        let point: EvalPoint = (1..=self.dim()).map(|i| (format!("t{i}"), t[i - 1])).collect();
        let mut out = Vec::with_capacity(self.map.components().len());
        for c in self.map.components() {
            let v = c.eval(&point)?;
            if !v.is_finite() {
                return Err(PeriodError::NonFiniteValue { point: t.to_vec() });
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// A formal rational combination of smooth simplices of one degree into
/// one target space.  Terms with syntactically identical normal forms
/// merge, and terms whose coefficients cancel disappear, so boundary
/// computations stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularChain {
    degree: usize,
    target: Vec<String>,
    terms: BTreeMap<Vec<String>, (Rational, SmoothSimplex)>,
}

impl SingularChain {
    pub fn zero(degree: usize, target: Vec<String>) -> Self {
        SingularChain {
            degree,
            target,
            terms: BTreeMap::new(),
        }
    }

    /// The chain `1 · simplex`.
    pub fn from_simplex(simplex: SmoothSimplex) -> Self {
        let mut chain = SingularChain::zero(simplex.dim(), simplex.target().to_vec());
        chain.accumulate(Rational::from_integer(1.into()), simplex);
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &SmoothSimplex)> {
        self.terms.values().map(|(c, s)| (c, s))
    }

    fn accumulate(&mut self, coeff: Rational, simplex: SmoothSimplex) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(simplex.key()) {
            Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert((coeff, simplex));
                }
            }
            Entry::Occupied(mut e) => {
                e.get_mut().0 += coeff;
                if e.get().0.is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `coeff · simplex`, checking degree and target compatibility.
    pub fn add_scaled(mut self, coeff: Rational, simplex: SmoothSimplex) -> Result<Self, PeriodError> {
        if simplex.dim() != self.degree || simplex.target() != self.target {
            return Err(PeriodError::ChainMismatch);
        }
        self.accumulate(coeff, simplex);
        Ok(self)
    }

    pub fn add(&self, other: &SingularChain) -> Result<SingularChain, PeriodError> {
        if self.degree != other.degree || self.target != other.target {
            return Err(PeriodError::ChainMismatch);
        }
        let mut out = self.clone();
        for (c, s) in other.terms() {
            out.accumulate(c.clone(), s.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> SingularChain {
        let mut out = SingularChain::zero(self.degree, self.target.clone());
        for (c, s) in self.terms() {
            out.accumulate(c * factor, s.clone());
        }
        out
    }

    /// The boundary `∂(Σ c_i σ_i) = Σ c_i Σ_j (−1)^j (σ_i ∘ face_j)`.
    /// Degree-0 chains have zero boundary.
    pub fn boundary(&self) -> Result<SingularChain, PeriodError> {
        if self.degree == 0 {
            return Ok(SingularChain::zero(0, self.target.clone()));
        }
        let mut out = SingularChain::zero(self.degree - 1, self.target.clone());
        for (coeff, simplex) in self.terms() {
            for j in 0..=self.degree {
                let face = simplex.face(j)?;
                let signed = if j % 2 == 0 {
                    coeff.clone()
                } else {
                    -coeff.clone()
                };
                out.accumulate(signed, face);
            }
        }
        Ok(out)
    }

    /// Whether the boundary cancels, adding numerical point matching on
    /// top of the syntactic cancellation `boundary()` already performs:
    /// remaining boundary simplices are fingerprinted by their vertex and
    /// centroid images, clustered to `1e−7`, and the exact coefficient
    /// sum of every cluster must vanish.
    pub fn is_cycle(&self) -> Result<bool, PeriodError> {
        let boundary = self.boundary()?;
        if boundary.is_zero() {
            return Ok(true);
        }
        let k = boundary.degree;
        // Sample points of Δ_k: the vertices and the centroid.
        let mut samples: Vec<Vec<f64>> = Vec::new();
        samples.push(vec![0.0; k]);
        for i in 0..k {
            let mut v = vec![0.0; k];
            v[i] = 1.0;
            samples.push(v);
        }
        samples.push(vec![1.0 / (k as f64 + 1.0); k]);

        let mut clusters: Vec<(Vec<f64>, Rational)> = Vec::new();
        for (coeff, simplex) in boundary.terms() {
            let mut signature = Vec::new();
            for s in &samples {
                signature.extend(simplex.image(s)?);
            }
            let found = clusters.iter_mut().find(|(sig, _)| {
                sig.iter()
                    .zip(&signature)
                    .all(|(a, b)| (a - b).abs() < 1e-7)
            });
            match found {
                Some((_, total)) => *total += coeff.clone(),
                None => clusters.push((signature, coeff.clone())),
            }
        }
        Ok(clusters.iter().all(|(_, total)| total.is_zero()))
    }
}

/// Integrates a `k`-form over a smooth `k`-simplex: symbolic pullback to
/// `Δ_k`, then adaptive quadrature on the single `dt1∧…∧dtk` coefficient.
pub fn integrate(
    form: &DifferentialForm,
    simplex: &SmoothSimplex,
    spec: &QuadratureSpec,
) -> Result<f64, PeriodError> {
    let k = simplex.dim();
    if form.degree() != k {
        return Err(PeriodError::DegreeMismatch {
            form: form.degree(),
            simplex: k,
        });
    }
    let pulled = simplex.map().pullback(form)?;
    if k == 0 {
        // A 0-form over a point: evaluate the pulled-back scalar.
        let value = match pulled.terms().next() {
            None => 0.0,
            Some((_, coeff)) => coeff.eval(&EvalPoint::new())?,
        };
        if !value.is_finite() {
            return Err(PeriodError::NonFiniteValue { point: vec![] });
        }
        return Ok(value);
    }
    let top = MultiIndex::new((1..=k).collect()).expect("increasing by construction");
    let coefficient = pulled
        .terms()
        .find(|(idx, _)| **idx == top)
        .map(|(_, c)| c.clone());
    let Some(coefficient) = coefficient else {
        return Ok(0.0); // pullback cancelled to the zero form
    };
    let compiled = coefficient.compile(&parameter_names(k))?;
    let mut stack = Vec::new();
    quadrature::adaptive_simplex_integral(k, spec, |t| compiled.eval_with(t, &mut stack))
}

/// Integrates a form over every simplex of a chain and combines the
/// results with the chain's rational coefficients.
pub fn integrate_chain(
    form: &DifferentialForm,
    chain: &SingularChain,
    spec: &QuadratureSpec,
) -> Result<f64, PeriodError> {
    let mut total = 0.0;
    for (coeff, simplex) in chain.terms() {
        total += rational_to_f64(coeff) * integrate(form, simplex, spec)?;
    }
    Ok(total)
}

/// `|∫_{∂c} ω − ∫_c dω|` for a `k`-chain `c` and a `(k−1)`-form `ω`; by
/// Stokes' theorem this is pure numerical error.
pub fn stokes_residual(
    form: &DifferentialForm,
    chain: &SingularChain,
    spec: &QuadratureSpec,
) -> Result<f64, PeriodError> {
    if chain.degree() == 0 || form.degree() + 1 != chain.degree() {
        return Err(PeriodError::DegreeMismatch {
            form: form.degree(),
            simplex: chain.degree(),
        });
    }
    let boundary_side = integrate_chain(form, &chain.boundary()?, spec)?;
    let interior_side = integrate_chain(&form.d(), chain, spec)?;
    Ok((boundary_side - interior_side).abs())
}

/// `|∫_σ F*ω − ∫_{F∘σ} ω|`: pulling the form back and pushing the
/// simplex forward must integrate identically.
pub fn naturality_residual(
    map: &SmoothMap,
    form: &DifferentialForm,
    simplex: &SmoothSimplex,
    spec: &QuadratureSpec,
) -> Result<f64, PeriodError> {
    let pulled = map.pullback(form)?;
    let through_form = integrate(&pulled, simplex, spec)?;
    let pushed = SmoothSimplex::new(map.compose(simplex.map())?)?;
    let through_chain = integrate(form, &pushed, spec)?;
    Ok((through_form - through_chain).abs())
}

/// A matrix of periods `∫_{cycle_j} form_i` with its numerical rank.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    /// `entries[i][j]` integrates form `i` over cycle `j`.
    pub entries: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    /// Singular values above this threshold counted towards the rank.
    pub rank_threshold: f64,
    pub rank: usize,
}

/// Computes the period matrix of closed forms against cycles.  Forms
/// must be certifiably closed (probabilistic `Unknown` verdicts are
/// reported, not silently accepted) and chains must be cycles.
pub fn period_matrix(
    forms: &[DifferentialForm],
    cycles: &[SingularChain],
    spec: &QuadratureSpec,
    zero_test: &ZeroTest,
) -> Result<PeriodMatrix, PeriodError> {
    for (i, form) in forms.iter().enumerate() {
        match form.is_closed_with(zero_test) {
            Verdict::Zero => {}
            Verdict::NonZero => return Err(PeriodError::NotClosed { form: i }),
            Verdict::Unknown => return Err(PeriodError::ClosednessUnknown { form: i }),
        }
    }
    for (j, cycle) in cycles.iter().enumerate() {
        if !cycle.is_cycle()? {
            return Err(PeriodError::NotACycle { cycle: j });
        }
    }
    let mut entries = Vec::with_capacity(forms.len());
    for form in forms {
        let mut row = Vec::with_capacity(cycles.len());
        for cycle in cycles {
            row.push(integrate_chain(form, cycle, spec)?);
        }
        entries.push(row);
    }

    let (rows, cols) = (forms.len(), cycles.len());
    let (singular_values, rank_threshold, rank) = if rows == 0 || cols == 0 {
        (Vec::new(), 0.0, 0)
    } else {
        let flat: Vec<f64> = entries.iter().flatten().copied().collect();
        let svd = nalgebra::DMatrix::from_row_slice(rows, cols, &flat).svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        let largest = sv.first().copied().unwrap_or(0.0);
        let threshold = spec.tolerance * rows.max(cols) as f64 * largest.max(1.0);
        let rank = sv.iter().filter(|&&s| s > threshold).count();
        (sv, threshold, rank)
    };
    Ok(PeriodMatrix {
        entries,
        singular_values,
        rank_threshold,
        rank,
    })
}

/// The loop `t ↦ (cos(2π·turns·t), sin(2π·turns·t))` in coordinates
/// `x, y`, traversing the unit circle `turns` times.
pub fn winding_circle(turns: i64) -> SmoothSimplex {
    scaled_winding_circle(turns, Rational::from_integer(1.into()))
}

/// A winding circle of the given radius, centred at the origin.
pub fn scaled_winding_circle(turns: i64, radius: Rational) -> SmoothSimplex {
    let angle = Expr::int(2) * Expr::var(crate::expr::PI_NAME) * Expr::int(turns) * Expr::var("t1");
    let r = Expr::Const(radius);
    SmoothSimplex::from_components(
        1,
        vec!["x".into(), "y".into()],
        vec![r.clone() * Expr::cos(angle.clone()), r * Expr::sin(angle)],
    )
    .expect("components are well-formed")
}

/// The straight path from `(from)` to `(to)` as an affine 1-simplex.
pub fn segment(
    target: Vec<String>,
    from: Vec<Rational>,
    to: Vec<Rational>,
) -> Result<SmoothSimplex, PeriodError> {
    SmoothSimplex::affine(target, &[from, to])
}
