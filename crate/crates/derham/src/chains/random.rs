//! Seeded generators for complexes and short exact sequences with known
//! answers.
//!
//! Each generator builds a canonical object whose cohomology is visible by
//! construction — harmonic basis vectors plus cancelling pairs — and then
//! conjugates it by random unimodular matrices.  The expected Betti
//! numbers (and, for sequences, connecting-map ranks) ride along, so test
//! suites can compare computed answers against independently known ones on
//! arbitrarily many instances.

use rand::Rng;

use super::{CochainComplex, ComplexSes, RationalMatrix};
use crate::Rational;

/// A random complex together with its Betti numbers, known by
/// construction rather than computed.
#[derive(Debug, Clone)]
pub struct SampledComplex {
    pub complex: CochainComplex,
    pub betti: Vec<usize>,
}

/// A random short exact sequence of complexes with the Betti numbers of
/// all three sides and the expected rank of each connecting map.
#[derive(Debug, Clone)]
pub struct SampledSes {
    pub ses: ComplexSes,
    pub betti_a: Vec<usize>,
    pub betti_b: Vec<usize>,
    pub betti_c: Vec<usize>,
    /// Expected rank of `δ_k : H^k(C) → H^{k+1}(A)`.
    pub delta_ranks: Vec<usize>,
}

/// Random unimodular integer matrix (product of unit-triangular factors),
/// so conjugation stays exact and invertible.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut lower = RationalMatrix::identity(n);
    let mut upper = RationalMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = Rational::from_integer(rng.gen_range(-2i64..=2).into());
            upper[(j, i)] = Rational::from_integer(rng.gen_range(-2i64..=2).into());
        }
    }
    lower.mul(&upper)
}

fn invert(m: &RationalMatrix) -> RationalMatrix {
    m.solve(&RationalMatrix::identity(m.rows()))
        .expect("unimodular matrices are invertible")
}

/// Degree profile of the canonical staircase complex: at degree `k` the
/// first `harmonic[k]` coordinates are cocycles hit by nothing, the next
/// `pair_in[k] = ranks[k-1]` coordinates absorb the differential from
/// below, and the last `ranks[k]` coordinates map isomorphically up.
struct Profile {
    harmonic: Vec<usize>,
    ranks: Vec<usize>, // ranks[k] = rank of d_k, defined for k < len-1
}

impl Profile {
    fn sample<R: Rng>(rng: &mut R, len: usize, acyclic: bool) -> Profile {
        let harmonic: Vec<usize> = (0..len)
            .map(|_| if acyclic { 0 } else { rng.gen_range(0..=2) })
            .collect();
        let mut ranks: Vec<usize> = (0..len.saturating_sub(1))
            .map(|_| rng.gen_range(0..=2))
            .collect();
        if acyclic {
            // Every degree must be covered by a pair; make sure no
            // degree collapses to dimension zero on both sides by
            // bumping ranks where needed (dimension 0 is fine, but a
            // fully-zero complex is a degenerate sample).
            if ranks.iter().all(|&r| r == 0) && !ranks.is_empty() {
                ranks[0] = 1;
            }
        }
        Profile { harmonic, ranks }
    }

    fn len(&self) -> usize {
        self.harmonic.len()
    }

    fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    fn rank_below(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.rank(k - 1)
        }
    }

    fn dim(&self, k: usize) -> usize {
        self.harmonic[k] + self.rank_below(k) + self.rank(k)
    }

    /// Canonical differential at degree `k`: sends the trailing
    /// `ranks[k]` coordinates to the middle block of degree `k+1`.
    fn differential(&self, k: usize) -> RationalMatrix {
        let mut d = RationalMatrix::zeros(self.dim(k + 1), self.dim(k));
        let src = self.harmonic[k] + self.rank_below(k);
        let dst = self.harmonic[k + 1];
        for j in 0..self.rank(k) {
            d[(dst + j, src + j)] = Rational::from_integer(1.into());
        }
        d
    }

    fn canonical(&self) -> CochainComplex {
        let dims = (0..self.len()).map(|k| self.dim(k)).collect();
        let diffs = (0..self.len() - 1).map(|k| self.differential(k)).collect();
        CochainComplex::new(dims, diffs).expect("canonical staircase complex is valid")
    }
}

/// Random complex with `len` degrees; Betti numbers are the harmonic
/// counts of the underlying staircase, preserved by conjugation.
pub fn random_complex<R: Rng>(rng: &mut R, len: usize) -> SampledComplex {
    assert!(len >= 1);
    let profile = Profile::sample(rng, len, false);
    let canonical = profile.canonical();
    let q: Vec<RationalMatrix> = (0..len)
        .map(|k| random_unimodular(rng, profile.dim(k)))
        .collect();
    let diffs = (0..len - 1)
        .map(|k| q[k + 1].mul(canonical.differential(k).unwrap()).mul(&invert(&q[k])))
        .collect();
    let complex =
        CochainComplex::new(canonical.dims().to_vec(), diffs).expect("conjugation preserves d²=0");
    SampledComplex {
        complex,
        betti: profile.harmonic.clone(),
    }
}

/// Membership of one canonical basis vector in the subcomplex.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Sub,
    Quotient,
}

/// Random short exact sequence `0 → A → B → C → 0`.  `A` is a random
/// subcomplex of a staircase complex `B` (in canonical coordinates, a
/// subset of basis vectors closed under the differential), `C` the
/// quotient; all three are then conjugated by unimodular matrices.
///
/// With `acyclic_middle` the middle complex has no cohomology at all, so
/// every connecting map in the long exact sequence must be bijective.
pub fn random_ses<R: Rng>(rng: &mut R, len: usize, acyclic_middle: bool) -> SampledSes {
    assert!(len >= 1);
    let profile = Profile::sample(rng, len, acyclic_middle);
    let canonical = profile.canonical();

    // Decide membership blockwise.  Harmonic vectors pick a side freely;
    // a pair (source at k, target at k+1) must keep its target in the
    // subcomplex whenever the source is there, leaving three options.
    let mut side: Vec<Vec<Side>> = (0..len)
        .map(|k| vec![Side::Quotient; profile.dim(k)])
        .collect();
    let mut betti_a = vec![0usize; len];
    let mut betti_c = vec![0usize; len];
    let mut delta_ranks = vec![0usize; len];
    for k in 0..len {
        for slot in side[k].iter_mut().take(profile.harmonic[k]) {
            if rng.gen_bool(0.5) {
                *slot = Side::Sub;
                betti_a[k] += 1;
            } else {
                betti_c[k] += 1;
            }
        }
    }
    for k in 0..len.saturating_sub(1) {
        let src_base = profile.harmonic[k] + profile.rank_below(k);
        let dst_base = profile.harmonic[k + 1];
        for j in 0..profile.rank(k) {
            match rng.gen_range(0..3) {
                0 => {
                    // whole pair in the subcomplex: cancels inside A
                    side[k][src_base + j] = Side::Sub;
                    side[k + 1][dst_base + j] = Side::Sub;
                }
                1 => {
                    // target only: a class of A born at k+1, killed in B —
                    // the image of a C-class under the connecting map
                    side[k + 1][dst_base + j] = Side::Sub;
                    betti_a[k + 1] += 1;
                    betti_c[k] += 1;
                    delta_ranks[k] += 1;
                }
                _ => {
                    // whole pair in the quotient: cancels inside C
                }
            }
        }
    }

    // Canonical inclusion / projection from the membership table.
    let picks = |k: usize, want: Side| -> Vec<usize> {
        (0..profile.dim(k))
            .filter(|&j| side[k][j] == want)
            .collect()
    };
    let sub_idx: Vec<Vec<usize>> = (0..len).map(|k| picks(k, Side::Sub)).collect();
    let quo_idx: Vec<Vec<usize>> = (0..len).map(|k| picks(k, Side::Quotient)).collect();

    let dims_a: Vec<usize> = sub_idx.iter().map(|s| s.len()).collect();
    let dims_c: Vec<usize> = quo_idx.iter().map(|s| s.len()).collect();

    let restrict = |d: &RationalMatrix, rows: &[usize], cols: &[usize]| {
        RationalMatrix::from_fn(rows.len(), cols.len(), |i, j| d[(rows[i], cols[j])].clone())
    };
    let diffs_a: Vec<RationalMatrix> = (0..len - 1)
        .map(|k| restrict(canonical.differential(k).unwrap(), &sub_idx[k + 1], &sub_idx[k]))
        .collect();
    let diffs_c: Vec<RationalMatrix> = (0..len - 1)
        .map(|k| restrict(canonical.differential(k).unwrap(), &quo_idx[k + 1], &quo_idx[k]))
        .collect();

    let mut f_canon = Vec::with_capacity(len);
    let mut g_canon = Vec::with_capacity(len);
    for k in 0..len {
        let mut f = RationalMatrix::zeros(profile.dim(k), dims_a[k]);
        for (col, &j) in sub_idx[k].iter().enumerate() {
            f[(j, col)] = Rational::from_integer(1.into());
        }
        f_canon.push(f);
        let mut g = RationalMatrix::zeros(dims_c[k], profile.dim(k));
        for (row, &j) in quo_idx[k].iter().enumerate() {
            g[(row, j)] = Rational::from_integer(1.into());
        }
        g_canon.push(g);
    }

    // Conjugate all three sides, transporting f and g along.
    let qa: Vec<RationalMatrix> = dims_a.iter().map(|&n| random_unimodular(rng, n)).collect();
    let qb: Vec<RationalMatrix> = (0..len)
        .map(|k| random_unimodular(rng, profile.dim(k)))
        .collect();
    let qc: Vec<RationalMatrix> = dims_c.iter().map(|&n| random_unimodular(rng, n)).collect();

    let conj = |q: &[RationalMatrix], diffs: &[RationalMatrix]| -> Vec<RationalMatrix> {
        (0..diffs.len())
            .map(|k| q[k + 1].mul(&diffs[k]).mul(&invert(&q[k])))
            .collect()
    };
    let a = CochainComplex::new(dims_a, conj(&qa, &diffs_a)).expect("subcomplex is valid");
    let b = CochainComplex::new(
        canonical.dims().to_vec(),
        conj(&qb, &(0..len - 1).map(|k| canonical.differential(k).unwrap().clone()).collect::<Vec<_>>()),
    )
    .expect("conjugated staircase is valid");
    let c = CochainComplex::new(dims_c, conj(&qc, &diffs_c)).expect("quotient complex is valid");

    let f: Vec<RationalMatrix> = (0..len)
        .map(|k| qb[k].mul(&f_canon[k]).mul(&invert(&qa[k])))
        .collect();
    let g: Vec<RationalMatrix> = (0..len)
        .map(|k| qc[k].mul(&g_canon[k]).mul(&invert(&qb[k])))
        .collect();

    let ses = ComplexSes::new(a, b, c, f, g).expect("construction satisfies the axioms");
    SampledSes {
        ses,
        betti_a,
        betti_b: profile.harmonic.clone(),
        betti_c,
        delta_ranks,
    }
}
