//! Tri-state zero testing.
//!
//! Normalization reduces the question "is `e` identically zero?" to
//! "is a polynomial numerator zero?".  On the rational fragment that is
//! decided outright.  When transcendental atoms survive, a zero numerator
//! still certifies zero exactly; a nonzero numerator is tested by seeded
//! random sampling, so `Zero` is then probabilistic while `NonZero` (a
//! sample clearly away from zero) stays sound.

use super::normal::Fraction;
use super::{Expr, PI_NAME};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Outcome of [`Expr::is_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Identically zero; exact on the rational fragment, probabilistic
    /// (but heavily sampled) otherwise.
    Zero,
    /// Witnessed nonzero.
    NonZero,
    /// The test could not decide: normalization failed or sampling kept
    /// hitting singularities.
    Unknown,
}

impl Verdict {
    /// Combines verdicts about several quantities that must all vanish.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (NonZero, _) | (_, NonZero) => NonZero,
            (Zero, Zero) => Zero,
            _ => Unknown,
        }
    }
}

/// Sampling parameters for the probabilistic part of the zero test.
#[derive(Debug, Clone)]
pub struct ZeroTest {
    /// Number of valid sample points required.
    pub samples: usize,
    /// Components are drawn as `p/q` with `|p| ≤ max_magnitude`,
    /// `1 ≤ q ≤ max_magnitude`.
    pub max_magnitude: i64,
    /// Values at or below this magnitude count as zero.
    pub tolerance: f64,
    /// RNG seed; the test is deterministic for a fixed seed.
    pub seed: u64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            samples: 32,
            max_magnitude: 10_000,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTest {
            seed,
            ..Default::default()
        }
    }
}

/// Denominator samples closer to zero than this are re-drawn.
const DENOMINATOR_GUARD: f64 = 1e-9;

pub(super) fn is_zero(e: &Expr, cfg: &ZeroTest) -> Verdict {
    let frac = match Fraction::from_expr(e) {
        Ok(f) => f,
        Err(_) => return Verdict::Unknown,
    };
    if frac.num_is_zero() {
        return Verdict::Zero;
    }
    if frac.is_rational_fragment() {
        // Nonzero polynomial numerator over an infinite field: the function
        // is not identically zero.
        return Verdict::NonZero;
    }

    let (num, den) = frac.parts();
    let mut vars: BTreeSet<String> = num.free_vars();
    vars.extend(den.free_vars());
    vars.remove(PI_NAME);
    let vars: Vec<String> = vars.into_iter().collect();
    let (cnum, cden) = match (num.compile(&vars), den.compile(&vars)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Verdict::Unknown,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut args = vec![0.0; vars.len()];
    let mut stack = Vec::new();
    let mut valid = 0usize;
    let budget = cfg.samples.saturating_mul(50).max(50);
    for _ in 0..budget {
        if valid == cfg.samples {
            break;
        }
        for slot in args.iter_mut() {
            let p: i64 = rng.gen_range(-cfg.max_magnitude..=cfg.max_magnitude);
            let q: i64 = rng.gen_range(1..=cfg.max_magnitude);
            *slot = p as f64 / q as f64;
        }
        let d = cden.eval_with(&args, &mut stack);
        if !d.is_finite() || d.abs() < DENOMINATOR_GUARD {
            continue;
        }
        let v = cnum.eval_with(&args, &mut stack) / d;
        if !v.is_finite() {
            continue;
        }
        if v.abs() > cfg.tolerance {
            return Verdict::NonZero;
        }
        valid += 1;
    }
    if valid == cfg.samples {
        Verdict::Zero
    } else {
        Verdict::Unknown
    }
}
