//! Simplex quadrature: Grundmann–Möller rules with uniform edgewise
//! subdivision and adaptive refinement.
//!
//! The Grundmann–Möller family integrates polynomials of degree `2s + 1`
//! exactly over the standard simplex `T_n = {x ≥ 0, Σx ≤ 1}`; its weights
//! are assembled here in exact rational arithmetic and converted to `f64`
//! once, so the rule itself carries no accumulation error.  Refinement
//! splits `T_n` into `m^n` equal-volume cells (the edgewise subdivision,
//! walked through the order-simplex picture `u_1 ≥ … ≥ u_n`), applies the
//! rule on every cell, and doubles `m` until two successive levels agree
//! to half the requested tolerance.

use num_bigint::BigInt;
use num_traits::One;

use super::{PeriodError, QuadratureSpec};
use crate::expr::rational_to_f64;
use crate::Rational;

/// An interpolatory rule on the standard `dim`-simplex: evaluation points
/// (cartesian coordinates) and weights summing to the simplex volume
/// `1/dim!`.
#[derive(Debug, Clone)]
pub struct SimplexRule {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product::<BigInt>().max(BigInt::one())
}

/// All `parts`-tuples of nonnegative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl SimplexRule {
    /// The Grundmann–Möller rule of index `s` on the `dim`-simplex,
    /// exact for polynomials of total degree `2s + 1`.
    ///
    /// Point `β` (a composition of `s − i` into `dim + 1` parts) sits at
    /// barycentric coordinates `(2β_j + 1)/(d + n − 2i)` and carries the
    /// weight `(−1)^i 2^{−2s} (d + n − 2i)^d / (i! (d + n − i)!)`, with
    /// `d = 2s + 1` and `n = dim`.
    pub fn grundmann_moeller(dim: usize, s: usize) -> SimplexRule {
        assert!(dim >= 1, "rules live on simplices of dimension ≥ 1");
        let n = dim;
        let d = 2 * s + 1;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut weight_sum = Rational::from_integer(0.into());
        for i in 0..=s {
            let scale = d + n - 2 * i;
            let numer = BigInt::from(scale as u64).pow(d as u32);
            let denom = BigInt::from(2u64).pow(2 * s as u32) * factorial(i) * factorial(d + n - i);
            let mut coeff = Rational::new(numer, denom);
            if i % 2 == 1 {
                coeff = -coeff;
            }
            for beta in compositions(s - i, n + 1) {
                // Cartesian coordinates drop the 0th barycentric entry.
                let point: Vec<f64> = beta[1..]
                    .iter()
                    .map(|&b| (2 * b + 1) as f64 / scale as f64)
                    .collect();
                points.push(point);
                weights.push(rational_to_f64(&coeff));
                weight_sum += &coeff;
            }
        }
        debug_assert_eq!(
            weight_sum,
            Rational::new(BigInt::one(), factorial(n)),
            "weights must sum to the simplex volume"
        );
        SimplexRule {
            dim,
            points,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f` on the standard simplex.
    pub fn apply<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

/// One cell of the `m`-fold edgewise subdivision, in the order-simplex
/// picture: the integer offset `a_1 ≥ … ≥ a_n` locates the unit cube, the
/// permutation ranks its fractional parts.
struct Cell {
    offset: Vec<usize>,
    /// `rank_of[i]` = descending rank of coordinate `i` inside the cube.
    rank_of: Vec<usize>,
}

fn descending_offsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for a in (0..=max).rev() {
            acc.push(a);
            rec(n, a, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m - 1, &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 0..remaining.len() {
            let v = remaining.remove(i);
            acc.push(v);
            rec(remaining, acc, out);
            acc.pop();
            remaining.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// The `m^n` cells of the subdivision.  A permutation is admissible for
/// an offset when, inside every run of equal offsets, it ranks the
/// earlier coordinate higher — ties must respect the global ordering, and
/// this also makes each cell appear exactly once.
fn cells(n: usize, m: usize) -> Vec<Cell> {
    let perms = permutations(n);
    let mut out = Vec::new();
    for offset in descending_offsets(n, m) {
        for perm in &perms {
            // perm[j] = coordinate holding the j-th largest fraction
            let mut rank_of = vec![0; n];
            for (rank, &coord) in perm.iter().enumerate() {
                rank_of[coord] = rank;
            }
            let admissible = (0..n.saturating_sub(1))
                .all(|i| offset[i] != offset[i + 1] || rank_of[i] < rank_of[i + 1]);
            if admissible {
                out.push(Cell {
                    offset: offset.clone(),
                    rank_of: rank_of.clone(),
                });
            }
        }
    }
    debug_assert_eq!(out.len(), m.pow(n as u32));
    out
}

/// Applies `rule` over every cell of the `m`-fold subdivision of the
/// standard simplex.  Evaluation points are mapped standard → order
/// coordinates (suffix sums), placed inside the cell, and mapped back
/// (successive differences); every evaluation is checked to be finite.
pub(crate) fn subdivided_integral<F: FnMut(&[f64]) -> f64>(
    rule: &SimplexRule,
    m: usize,
    mut f: F,
) -> Result<f64, PeriodError> {
    let n = rule.dim;
    let scale = 1.0 / m as f64;
    let mut total = 0.0;
    let mut u = vec![0.0; n];
    let mut placed = vec![0.0; n];
    let mut y = vec![0.0; n];
    for cell in cells(n, m) {
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            // standard → order coordinates: u_i = x_i + … + x_n
            let mut suffix = 0.0;
            for i in (0..n).rev() {
                suffix += x[i];
                u[i] = suffix;
            }
            // into the cell: fractional part ranked by the permutation
            for i in 0..n {
                placed[i] = (cell.offset[i] as f64 + u[cell.rank_of[i]]) * scale;
            }
            // order → standard coordinates: successive differences
            for i in 0..n {
                let next = if i + 1 < n { placed[i + 1] } else { 0.0 };
                y[i] = placed[i] - next;
            }
            let value = f(&y);
            if !value.is_finite() {
                return Err(PeriodError::NonFiniteValue { point: y.clone() });
            }
            total += w * value;
        }
    }
    Ok(total * scale.powi(n as i32))
}

/// Integrates `f` over the standard `dim`-simplex, doubling the
/// subdivision until two successive estimates agree to half the
/// tolerance (or the evaluation budget runs out).
pub fn adaptive_simplex_integral<F: FnMut(&[f64]) -> f64>(
    dim: usize,
    spec: &QuadratureSpec,
    mut f: F,
) -> Result<f64, PeriodError> {
    let rule = SimplexRule::grundmann_moeller(dim, spec.degree);
    let mut previous: Option<f64> = None;
    let mut best_delta = f64::INFINITY;
    for level in 0..=spec.max_refinements {
        let m = 1usize << level;
        let evaluations = m.pow(dim as u32).saturating_mul(rule.len());
        if evaluations > spec.max_evaluations {
            break;
        }
        let value = subdivided_integral(&rule, m, &mut f)?;
        if let Some(p) = previous {
            let delta = (value - p).abs();
            best_delta = best_delta.min(delta);
            if delta <= spec.tolerance / 2.0 {
                return Ok(value);
            }
        }
        previous = Some(value);
    }
    Err(PeriodError::ToleranceNotMet {
        best: previous.unwrap_or(f64::NAN),
        achieved: best_delta,
        requested: spec.tolerance,
    })
}
