//! Computational exterior calculus and de Rham cohomology at desk scale.
//!
//! The crate is organised as a small tower:
//!
//! * [`expr`] — symbolic scalar expressions over named variables with exact
//!   rational constants, a canonical rational-function normal form, and a
//!   tri-state zero test.
//! * [`forms`] — differential forms with symbolic coefficients: wedge product,
//!   exterior derivative, pullback along smooth maps.
//! * [`chains`] — exact rational linear algebra, cochain complexes, Betti
//!   numbers, short exact sequences of complexes and the connecting
//!   homomorphism of the long exact sequence.
//! * [`spaces`] — simplicial complexes and dimension-level reasoning:
//!   coboundary complexes, Mayer–Vietoris bookkeeping, Künneth products,
//!   Poincaré duality checks.
//! * [`periods`] — numerical integration of forms over smooth singular
//!   chains: simplex quadrature, boundaries, Stokes residuals and period
//!   matrices.
//! * [`io`] — serde document types for the JSON interchange formats used by
//!   the command-line front end.
//!
//! Everything symbolic is exact (arbitrary-precision rational arithmetic);
//! floating point enters only at the quadrature layer and in the probabilistic
//! part of the zero test.

pub mod chains;
pub mod expr;
pub mod forms;
pub mod io;
pub mod periods;
pub mod spaces;

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

pub use chains::{CochainComplex, ComplexSes, ExactSequence, RationalMatrix};
pub use expr::{EvalPoint, Expr, Verdict, ZeroTest};
pub use forms::{DifferentialForm, MultiIndex, SmoothMap};
pub use periods::{QuadratureSpec, SingularChain, SmoothSimplex};
pub use spaces::{BettiProfile, CoverSpec, SimplicialComplex};
