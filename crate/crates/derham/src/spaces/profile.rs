//! Dimension-counting calculators on Betti numbers.
//!
//! A [`BettiProfile`] is the numeric shadow of a space: its Betti numbers
//! plus the two flags (compact, oriented) that gate Poincaré duality.
//! Profiles multiply under [`BettiProfile::kunneth`] by convolution and
//! answer duality and vanishing questions degree by degree.
//!
//! [`CoverSpec`] feeds the same arithmetic through the Mayer–Vietoris
//! long exact sequence: given the Betti numbers of two cover pieces and
//! their intersection, plus the ranks of the comparison maps
//! `H^k(U) ⊕ H^k(V) → H^k(U∩V)`, exactness pins down every Betti number
//! of the union.  The degree-0 comparison rank is never guessed — it is
//! computed from which components of the intersection lie in which
//! components of the pieces.  Higher ranks are extra data; degrees whose
//! rank is missing are reported as undetermined rather than defaulted.

use std::collections::BTreeMap;

use super::SpaceError;
use crate::chains::RationalMatrix;
use crate::Rational;

/// Betti numbers of a space together with the flags duality needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiProfile {
    betti: Vec<usize>,
    pub compact: bool,
    pub oriented: bool,
}

impl BettiProfile {
    pub fn new(betti: Vec<usize>, compact: bool, oriented: bool) -> Self {
        BettiProfile {
            betti,
            compact,
            oriented,
        }
    }

    /// Profile of a finite simplicial complex (always compact);
    /// orientability is geometric knowledge the caller supplies.
    pub fn of_complex(complex: &super::SimplicialComplex, oriented: bool) -> Self {
        BettiProfile::new(complex.betti(), true, oriented)
    }

    /// `b_k`, with zero beyond the stored range.
    pub fn betti(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn numbers(&self) -> &[usize] {
        &self.betti
    }

    pub fn is_connected(&self) -> bool {
        self.betti(0) == 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Betti numbers of a product space: convolution
    /// `b_k = Σ_i b_i · b'_{k−i}`.  Compactness and orientation both
    /// persist exactly when both factors have them.
    pub fn kunneth(&self, other: &BettiProfile) -> BettiProfile {
        if self.betti.is_empty() || other.betti.is_empty() {
            return BettiProfile::new(Vec::new(), self.compact && other.compact, self.oriented && other.oriented);
        }
        let top = self.betti.len() + other.betti.len() - 1;
        let betti = (0..top)
            .map(|k| {
                (0..=k)
                    .map(|i| self.betti(i) * other.betti(k - i))
                    .sum::<usize>()
            })
            .collect();
        BettiProfile::new(
            betti,
            self.compact && other.compact,
            self.oriented && other.oriented,
        )
    }

    /// Poincaré duality `b_k = b_{n−k}` for an `n`-manifold profile.
    /// Refuses (rather than failing) when the hypotheses are absent.
    pub fn poincare_duality(&self, dimension: usize) -> DualityOutcome {
        if !self.compact || !self.oriented {
            let mut missing = Vec::new();
            if !self.compact {
                missing.push("compact");
            }
            if !self.oriented {
                missing.push("oriented");
            }
            return DualityOutcome::Refused {
                reason: format!("duality needs a {} manifold", missing.join(" and ")),
            };
        }
        let failures = (0..=dimension / 2)
            .filter(|&k| self.betti(k) != self.betti(dimension - k))
            .map(|k| DualityFailure {
                degree: k,
                betti_low: self.betti(k),
                betti_high: self.betti(dimension - k),
            })
            .collect();
        DualityOutcome::Checked {
            dimension,
            failures,
        }
    }

    /// Degrees above `dimension` carrying nonzero Betti numbers — for an
    /// honest `dimension`-dimensional space there are none.
    pub fn vanishing_violations(&self, dimension: usize) -> Vec<usize> {
        self.betti
            .iter()
            .enumerate()
            .skip(dimension + 1)
            .filter(|(_, &b)| b > 0)
            .map(|(k, _)| k)
            .collect()
    }
}

/// One broken duality pairing: `b_{degree} ≠ b_{dimension − degree}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityFailure {
    pub degree: usize,
    pub betti_low: usize,
    pub betti_high: usize,
}

/// Result of a duality check: refused for lack of hypotheses, or checked
/// with the list of failing degree pairs (empty means duality holds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityOutcome {
    Refused { reason: String },
    Checked {
        dimension: usize,
        failures: Vec<DualityFailure>,
    },
}

impl DualityOutcome {
    /// `Some(true)` if checked and clean, `Some(false)` if checked with
    /// failures, `None` if refused.
    pub fn holds(&self) -> Option<bool> {
        match self {
            DualityOutcome::Refused { .. } => None,
            DualityOutcome::Checked { failures, .. } => Some(failures.is_empty()),
        }
    }
}

/// Numeric description of a two-piece cover: Betti numbers of the pieces
/// and the intersection, which intersection component lies in which piece
/// component, and optional comparison ranks at higher degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    u: Vec<usize>,
    v: Vec<usize>,
    intersection: Vec<usize>,
    incidence: Vec<(usize, usize)>,
    j_ranks: BTreeMap<usize, usize>,
}

impl CoverSpec {
    /// `incidence` must list, for every component of the intersection,
    /// the containing components of `u` and `v`.
    pub fn new(
        u: Vec<usize>,
        v: Vec<usize>,
        intersection: Vec<usize>,
        incidence: Vec<(usize, usize)>,
    ) -> Result<Self, SpaceError> {
        let w0 = intersection.first().copied().unwrap_or(0);
        if incidence.len() != w0 {
            return Err(SpaceError::IncidenceCount {
                expected: w0,
                found: incidence.len(),
            });
        }
        let (u0, v0) = (
            u.first().copied().unwrap_or(0),
            v.first().copied().unwrap_or(0),
        );
        for (i, &(cu, cv)) in incidence.iter().enumerate() {
            if cu >= u0 {
                return Err(SpaceError::IncidenceOutOfRange {
                    component: i,
                    side: "first",
                });
            }
            if cv >= v0 {
                return Err(SpaceError::IncidenceOutOfRange {
                    component: i,
                    side: "second",
                });
            }
        }
        Ok(CoverSpec {
            u,
            v,
            intersection,
            incidence,
            j_ranks: BTreeMap::new(),
        })
    }

    fn pieces(&self, k: usize) -> usize {
        self.u.get(k).copied().unwrap_or(0) + self.v.get(k).copied().unwrap_or(0)
    }

    fn overlap(&self, k: usize) -> usize {
        self.intersection.get(k).copied().unwrap_or(0)
    }

    /// Supplies the rank of the degree-`k` comparison map
    /// `H^k(U) ⊕ H^k(V) → H^k(U∩V)` for some `k ≥ 1`; degree 0 is always
    /// derived from the incidence data.
    pub fn with_j_rank(mut self, degree: usize, rank: usize) -> Result<Self, SpaceError> {
        if degree == 0 {
            return Err(SpaceError::ReservedDegree);
        }
        let max = self.pieces(degree).min(self.overlap(degree));
        if rank > max {
            return Err(SpaceError::RankTooLarge { degree, rank, max });
        }
        self.j_ranks.insert(degree, rank);
        Ok(self)
    }

    /// Rank of the degree-0 comparison map, computed exactly: the signed
    /// component-incidence matrix maps piece indicator functions to
    /// intersection indicator functions.
    pub fn degree_zero_rank(&self) -> usize {
        let (u0, v0) = (
            self.u.first().copied().unwrap_or(0),
            self.v.first().copied().unwrap_or(0),
        );
        let mut m = RationalMatrix::zeros(self.incidence.len(), u0 + v0);
        for (row, &(cu, cv)) in self.incidence.iter().enumerate() {
            m[(row, cu)] = Rational::from_integer(1.into());
            m[(row, u0 + cv)] = Rational::from_integer((-1).into());
        }
        m.rank()
    }

    /// Walks the Mayer–Vietoris long exact sequence degree by degree.
    /// Exactness gives, writing `B_k` for the pieces, `W_k` for the
    /// intersection and `r_k` for the comparison rank at degree `k`:
    ///
    /// `b_k(union) = rank δ_{k−1} + B_k − r_k`, `rank δ_k = W_k − r_k`.
    ///
    /// Degrees whose comparison rank is unknown (and every later degree
    /// that depends on it) come back as `None`.
    pub fn solve(&self) -> MayerVietorisSolution {
        let top = self.u.len().max(self.v.len()).max(self.intersection.len());
        let mut betti = Vec::new();
        let mut j_ranks = Vec::new();
        let mut delta_ranks = Vec::new();
        let mut missing = Vec::new();
        let mut delta_below: Option<usize> = Some(0);
        for k in 0..=top {
            let b = self.pieces(k);
            let w = self.overlap(k);
            let j = if b == 0 || w == 0 {
                Some(0)
            } else if k == 0 {
                Some(self.degree_zero_rank())
            } else {
                let known = self.j_ranks.get(&k).copied();
                if known.is_none() {
                    missing.push(k);
                }
                known
            };
            betti.push(match (delta_below, j) {
                (Some(d), Some(j)) => Some(d + b - j),
                _ => None,
            });
            delta_ranks.push(j.map(|j| w - j));
            j_ranks.push(j);
            delta_below = delta_ranks[k];
        }
        MayerVietorisSolution {
            betti,
            j_ranks,
            delta_ranks,
            missing_j_ranks: missing,
        }
    }
}

/// Output of [`CoverSpec::solve`]; `None` entries mark degrees the
/// supplied data could not determine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MayerVietorisSolution {
    /// Betti numbers of the union, degree by degree.
    pub betti: Vec<Option<usize>>,
    /// Comparison ranks actually used (computed at degree 0, supplied
    /// above).
    pub j_ranks: Vec<Option<usize>>,
    /// Ranks of the connecting maps out of each degree.
    pub delta_ranks: Vec<Option<usize>>,
    /// Degrees at which a comparison rank was needed but not supplied.
    pub missing_j_ranks: Vec<usize>,
}

impl MayerVietorisSolution {
    pub fn is_complete(&self) -> bool {
        self.missing_j_ranks.is_empty()
    }

    /// The Betti numbers with trailing zeros trimmed, when every degree
    /// was determined.
    pub fn betti_numbers(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.betti.len());
        for b in &self.betti {
            out.push((*b)?);
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }
}
