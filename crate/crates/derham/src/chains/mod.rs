//! Cochain complexes over the rationals and their cohomology.
//!
//! A [`CochainComplex`] stores the dimension of each degree and the
//! differentials between consecutive degrees; `d ∘ d = 0` is validated at
//! construction, never assumed.  Betti numbers come from exact rank
//! computations (`b_k = n_k − rank d_k − rank d_{k−1}`).
//!
//! A [`ComplexSes`] is a degreewise short exact sequence of complexes
//! `0 → A → B → C → 0` with commuting squares; [`ComplexSes::zigzag`]
//! produces the induced maps on cohomology together with the connecting
//! homomorphism, assembled into the long exact sequence and re-verified by
//! [`ExactSequence::check_exactness`].  All basis choices are deterministic
//! (first-nonzero pivoting), so identical inputs yield identical matrices.

pub mod matrix;
pub mod random;

pub use matrix::{RationalMatrix, Rref};

use crate::Rational;

/// Errors from complex and sequence construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("complex invalid at degree {degree}: {detail}")]
    InvalidComplex { degree: usize, detail: String },
    #[error("short exact sequence invalid at degree {degree}: {detail}")]
    InvalidSes { degree: usize, detail: String },
    #[error("sequence invalid at position {position}: {detail}")]
    InvalidSequence { position: usize, detail: String },
}

/// A finite cochain complex `C^0 → C^1 → … → C^N` of rational vector
/// spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainComplex {
    dims: Vec<usize>,
    diffs: Vec<RationalMatrix>,
}

impl CochainComplex {
    /// `diffs[k]` maps degree `k` to degree `k+1` and must be a
    /// `dims[k+1] × dims[k]` matrix; consecutive differentials must
    /// compose to zero.
    pub fn new(dims: Vec<usize>, diffs: Vec<RationalMatrix>) -> Result<Self, ChainError> {
        if dims.is_empty() {
            return Err(ChainError::InvalidComplex {
                degree: 0,
                detail: "a complex needs at least one degree".into(),
            });
        }
        if diffs.len() + 1 != dims.len() {
            return Err(ChainError::InvalidComplex {
                degree: 0,
                detail: format!(
                    "{} degrees require {} differentials, found {}",
                    dims.len(),
                    dims.len() - 1,
                    diffs.len()
                ),
            });
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(ChainError::InvalidComplex {
                    degree: k,
                    detail: format!(
                        "differential is {}×{}, expected {}×{}",
                        d.rows(),
                        d.cols(),
                        dims[k + 1],
                        dims[k]
                    ),
                });
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !diffs[k + 1].mul(&diffs[k]).is_zero() {
                return Err(ChainError::InvalidComplex {
                    degree: k,
                    detail: "d ∘ d ≠ 0".into(),
                });
            }
        }
        Ok(CochainComplex { dims, diffs })
    }

    /// Complex with zero differentials everywhere.
    pub fn with_zero_differentials(dims: Vec<usize>) -> Result<Self, ChainError> {
        let diffs = (0..dims.len().saturating_sub(1))
            .map(|k| RationalMatrix::zeros(dims[k + 1], dims[k]))
            .collect();
        Self::new(dims, diffs)
    }

    /// Number of degrees (top degree + 1).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid complex has at least one degree
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// The differential out of degree `k`, when `k` is not the top degree.
    pub fn differential(&self, k: usize) -> Option<&RationalMatrix> {
        self.diffs.get(k)
    }

    fn rank_out(&self, k: usize) -> usize {
        self.diffs.get(k).map_or(0, |d| d.rank())
    }

    fn rank_in(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.rank_out(k - 1)
        }
    }

    /// Betti numbers by rank-nullity: `b_k = n_k − rank d_k − rank d_{k−1}`.
    pub fn betti(&self) -> Vec<usize> {
        (0..self.len())
            .map(|k| {
                self.dim(k)
                    .checked_sub(self.rank_out(k) + self.rank_in(k))
                    .expect("d∘d = 0 keeps the image inside the kernel")
            })
            .collect()
    }

    /// Euler characteristic `Σ (−1)^k n_k`, which equals the alternating
    /// sum of the Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Degreewise direct sum: dimensions add, differentials are
    /// block-diagonal.  Both complexes must cover the same degree range.
    pub fn direct_sum(&self, other: &CochainComplex) -> Result<CochainComplex, ChainError> {
        if self.len() != other.len() {
            return Err(ChainError::InvalidComplex {
                degree: 0,
                detail: "direct summands must share one degree range".into(),
            });
        }
        let dims = (0..self.len()).map(|k| self.dim(k) + other.dim(k)).collect();
        let diffs = (0..self.diffs.len())
            .map(|k| self.diffs[k].block_diag(&other.diffs[k]))
            .collect();
        CochainComplex::new(dims, diffs)
    }

    /// The transposed complex: degrees reversed and differentials
    /// transposed.  This is how a chain (homology-side) complex is fed
    /// through the cohomology machinery.
    pub fn dual(&self) -> CochainComplex {
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let diffs: Vec<RationalMatrix> = self.diffs.iter().rev().map(|d| d.transpose()).collect();
        CochainComplex::new(dims, diffs).expect("transpose of a valid complex is valid")
    }

    /// Columns form representatives of a cohomology basis at degree `k`:
    /// kernel vectors of `d_k` completing an image basis of `d_{k−1}`,
    /// chosen deterministically.
    pub fn cohomology_basis(&self, k: usize) -> RationalMatrix {
        self.cohomology_solver(k).representatives
    }

    fn image_basis(&self, k: usize) -> RationalMatrix {
        // Independent column subset of d_{k-1}: its pivot columns.
        match k.checked_sub(1).and_then(|j| self.diffs.get(j)) {
            None => RationalMatrix::zeros(self.dim(k), 0),
            Some(d) => {
                let pivots = d.rref().pivots;
                let mut out = RationalMatrix::zeros(self.dim(k), pivots.len());
                for (j, &pc) in pivots.iter().enumerate() {
                    for i in 0..self.dim(k) {
                        out[(i, j)] = d[(i, pc)].clone();
                    }
                }
                out
            }
        }
    }

    fn kernel_at(&self, k: usize) -> RationalMatrix {
        match self.diffs.get(k) {
            Some(d) => d.kernel_basis(),
            None => RationalMatrix::identity(self.dim(k)),
        }
    }

    pub(crate) fn cohomology_solver(&self, k: usize) -> CohomologySolver {
        let image = self.image_basis(k);
        let kernel = self.kernel_at(k);
        // Kernel columns that introduce pivots beyond the image block
        // complete the image to a basis of the cocycles.
        let aug = image.hstack(&kernel);
        let picked: Vec<usize> = aug
            .rref()
            .pivots
            .into_iter()
            .filter(|&c| c >= image.cols())
            .map(|c| c - image.cols())
            .collect();
        let mut reps = RationalMatrix::zeros(self.dim(k), picked.len());
        for (j, &kc) in picked.iter().enumerate() {
            for i in 0..self.dim(k) {
                reps[(i, j)] = kernel[(i, kc)].clone();
            }
        }
        let decomposition = image.hstack(&reps);
        CohomologySolver {
            image_rank: image.cols(),
            representatives: reps,
            decomposition,
        }
    }
}

/// Expresses cocycles in a fixed cohomology basis at one degree.
pub(crate) struct CohomologySolver {
    image_rank: usize,
    pub representatives: RationalMatrix,
    decomposition: RationalMatrix,
}

impl CohomologySolver {
    pub fn betti(&self) -> usize {
        self.representatives.cols()
    }

    /// Class coordinates of the cocycle columns `v`; `None` when a column
    /// is not a cocycle of this degree.
    pub fn coordinates(&self, v: &RationalMatrix) -> Option<RationalMatrix> {
        let x = self.decomposition.solve(v)?;
        let mut out = RationalMatrix::zeros(self.betti(), v.cols());
        for i in 0..self.betti() {
            for j in 0..v.cols() {
                out[(i, j)] = x[(self.image_rank + i, j)].clone();
            }
        }
        Some(out)
    }
}

/// A degreewise short exact sequence of cochain complexes
/// `0 → A →f B →g C → 0`.
#[derive(Debug, Clone)]
pub struct ComplexSes {
    a: CochainComplex,
    b: CochainComplex,
    c: CochainComplex,
    f: Vec<RationalMatrix>,
    g: Vec<RationalMatrix>,
}

impl ComplexSes {
    /// Validates lengths, shapes, commutation with the differentials, and
    /// degreewise exactness (injective `f`, surjective `g`, `g f = 0`,
    /// `rank f + rank g = dim B`).  Failures name the degree and axiom.
    pub fn new(
        a: CochainComplex,
        b: CochainComplex,
        c: CochainComplex,
        f: Vec<RationalMatrix>,
        g: Vec<RationalMatrix>,
    ) -> Result<Self, ChainError> {
        let len = a.len();
        if b.len() != len || c.len() != len {
            return Err(ChainError::InvalidSes {
                degree: 0,
                detail: "the three complexes must share one degree range".into(),
            });
        }
        if f.len() != len || g.len() != len {
            return Err(ChainError::InvalidSes {
                degree: 0,
                detail: format!("need {len} maps per side, found {} / {}", f.len(), g.len()),
            });
        }
        for k in 0..len {
            if f[k].rows() != b.dim(k) || f[k].cols() != a.dim(k) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "f has the wrong shape".into(),
                });
            }
            if g[k].rows() != c.dim(k) || g[k].cols() != b.dim(k) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "g has the wrong shape".into(),
                });
            }
        }
        for k in 0..len.saturating_sub(1) {
            let (da, db, dc) = (&a.diffs[k], &b.diffs[k], &c.diffs[k]);
            if f[k + 1].mul(da) != db.mul(&f[k]) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "f does not commute with the differentials".into(),
                });
            }
            if g[k + 1].mul(db) != dc.mul(&g[k]) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "g does not commute with the differentials".into(),
                });
            }
        }
        for k in 0..len {
            let rf = f[k].rank();
            let rg = g[k].rank();
            if rf != a.dim(k) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "f is not injective".into(),
                });
            }
            if rg != c.dim(k) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "g is not surjective".into(),
                });
            }
            if !g[k].mul(&f[k]).is_zero() {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "g ∘ f ≠ 0".into(),
                });
            }
            if rf + rg != b.dim(k) {
                return Err(ChainError::InvalidSes {
                    degree: k,
                    detail: "rank f + rank g ≠ dim B (not exact in the middle)".into(),
                });
            }
        }
        Ok(ComplexSes { a, b, c, f, g })
    }

    pub fn a(&self) -> &CochainComplex {
        &self.a
    }

    pub fn b(&self) -> &CochainComplex {
        &self.b
    }

    pub fn c(&self) -> &CochainComplex {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Runs the zigzag construction: cohomology bases for all three
    /// complexes, the induced maps `f*`, `g*`, the connecting map `δ`
    /// (lift through `g`, apply `d_B`, pull back through `f`), and the
    /// assembled long sequence with its exactness verified.
    pub fn zigzag(&self) -> ZigzagReport {
        let len = self.len();
        let sa: Vec<_> = (0..len).map(|k| self.a.cohomology_solver(k)).collect();
        let sb: Vec<_> = (0..len).map(|k| self.b.cohomology_solver(k)).collect();
        let sc: Vec<_> = (0..len).map(|k| self.c.cohomology_solver(k)).collect();

        let mut f_star = Vec::with_capacity(len);
        let mut g_star = Vec::with_capacity(len);
        let mut delta = Vec::with_capacity(len);
        for k in 0..len {
            // Induced maps: push representatives through, re-express.
            let fa = self.f[k].mul(&sa[k].representatives);
            f_star.push(
                sb[k]
                    .coordinates(&fa)
                    .expect("f of a cocycle is a cocycle"),
            );
            let gb = self.g[k].mul(&sb[k].representatives);
            g_star.push(
                sc[k]
                    .coordinates(&gb)
                    .expect("g of a cocycle is a cocycle"),
            );

            // Connecting map on the C-representatives.
            let reps_c = &sc[k].representatives;
            if k + 1 == len {
                delta.push(RationalMatrix::zeros(0, reps_c.cols()));
                continue;
            }
            let lifted = self.g[k]
                .solve(reps_c)
                .expect("g is surjective, lifts exist");
            let db = self.b.diffs[k].mul(&lifted);
            let pulled = self.f[k + 1]
                .solve(&db)
                .expect("d of a lift lands in the image of f");
            delta.push(
                sa[k + 1]
                    .coordinates(&pulled)
                    .expect("pulled-back cocycle"),
            );
        }

        let betti_a: Vec<usize> = sa.iter().map(|s| s.betti()).collect();
        let betti_b: Vec<usize> = sb.iter().map(|s| s.betti()).collect();
        let betti_c: Vec<usize> = sc.iter().map(|s| s.betti()).collect();

        // Long sequence 0 → H⁰A → H⁰B → H⁰C → H¹A → … → H^topC → 0.
        let mut dims = Vec::with_capacity(3 * len);
        let mut maps = Vec::with_capacity(3 * len - 1);
        for k in 0..len {
            dims.push(betti_a[k]);
            dims.push(betti_b[k]);
            dims.push(betti_c[k]);
            maps.push(f_star[k].clone());
            maps.push(g_star[k].clone());
            if k + 1 < len {
                maps.push(delta[k].clone());
            }
        }
        let sequence = ExactSequence::new(dims, maps).expect("shapes agree by construction");
        let exactness = sequence.check_exactness();

        ZigzagReport {
            betti_a,
            betti_b,
            betti_c,
            f_star,
            g_star,
            delta,
            sequence,
            exactness,
        }
    }
}

/// Output of [`ComplexSes::zigzag`].
#[derive(Debug, Clone)]
pub struct ZigzagReport {
    pub betti_a: Vec<usize>,
    pub betti_b: Vec<usize>,
    pub betti_c: Vec<usize>,
    /// Induced maps on cohomology, one per degree, in the deterministic
    /// bases chosen by the solver.
    pub f_star: Vec<RationalMatrix>,
    pub g_star: Vec<RationalMatrix>,
    /// Connecting maps `H^k(C) → H^{k+1}(A)`; the top one has zero rows.
    pub delta: Vec<RationalMatrix>,
    /// The assembled long sequence.
    pub sequence: ExactSequence,
    /// Node-by-node exactness of the long sequence (this is a theorem, but
    /// it is recomputed, not assumed).
    pub exactness: ExactnessReport,
}

/// A finite sequence of linear maps `V_0 → V_1 → … → V_L` with implicit
/// zero spaces at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSequence {
    dims: Vec<usize>,
    maps: Vec<RationalMatrix>,
}

impl ExactSequence {
    pub fn new(dims: Vec<usize>, maps: Vec<RationalMatrix>) -> Result<Self, ChainError> {
        if dims.is_empty() {
            return Err(ChainError::InvalidSequence {
                position: 0,
                detail: "a sequence needs at least one space".into(),
            });
        }
        if maps.len() + 1 != dims.len() {
            return Err(ChainError::InvalidSequence {
                position: 0,
                detail: format!(
                    "{} spaces require {} maps, found {}",
                    dims.len(),
                    dims.len() - 1,
                    maps.len()
                ),
            });
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(ChainError::InvalidSequence {
                    position: i,
                    detail: format!(
                        "map is {}×{}, expected {}×{}",
                        m.rows(),
                        m.cols(),
                        dims[i + 1],
                        dims[i]
                    ),
                });
            }
        }
        Ok(ExactSequence { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    /// Exactness at every node: consecutive maps compose to zero and
    /// `rank(in) + rank(out) = dim`, with zero maps at both ends.
    pub fn check_exactness(&self) -> ExactnessReport {
        let nodes = (0..self.dims.len())
            .map(|i| {
                let rank_in = if i > 0 { self.maps[i - 1].rank() } else { 0 };
                let rank_out = if i < self.maps.len() {
                    self.maps[i].rank()
                } else {
                    0
                };
                let composite_zero = if i > 0 && i < self.maps.len() {
                    self.maps[i].mul(&self.maps[i - 1]).is_zero()
                } else {
                    true
                };
                NodeCheck {
                    index: i,
                    dim: self.dims[i],
                    rank_in,
                    rank_out,
                    composite_zero,
                    exact: composite_zero && rank_in + rank_out == self.dims[i],
                }
            })
            .collect();
        ExactnessReport { nodes }
    }
}

/// Per-node result of an exactness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCheck {
    pub index: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeCheck>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    /// Indices of the nodes failing exactness.
    pub fn failing_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| !n.exact)
            .map(|n| n.index)
            .collect()
    }
}

/// Convenience: rational from an integer literal.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests;
