use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_complex, random_ses, random_unimodular};
use super::*;

fn m(rows: usize, cols: usize, entries: &[i64]) -> RationalMatrix {
    RationalMatrix::from_i64(rows, cols, entries)
}

#[test]
fn betti_of_two_term_complexes() {
    // Identity differential kills everything.
    let c = CochainComplex::new(vec![1, 1], vec![m(1, 1, &[1])]).unwrap();
    assert_eq!(c.betti(), vec![0, 0]);

    // Zero differential keeps everything.
    let c = CochainComplex::new(vec![1, 1], vec![m(1, 1, &[0])]).unwrap();
    assert_eq!(c.betti(), vec![1, 1]);

    // Single-degree complex: Betti numbers are the dimensions.
    let c = CochainComplex::new(vec![3], vec![]).unwrap();
    assert_eq!(c.betti(), vec![3]);
}

#[test]
fn betti_of_circle_on_two_vertices() {
    // Two vertices joined by two parallel edges; the coboundary sends a
    // vertex function h to edge differences h(head) − h(tail).
    let d = m(2, 2, &[-1, 1, -1, 1]);
    let c = CochainComplex::new(vec![2, 2], vec![d]).unwrap();
    assert_eq!(c.betti(), vec![1, 1]);
    assert_eq!(c.euler_characteristic(), 0);
}

#[test]
fn construction_rejects_bad_input() {
    let err = CochainComplex::new(vec![2, 2], vec![m(1, 2, &[1, 0])]).unwrap_err();
    assert!(matches!(err, ChainError::InvalidComplex { degree: 0, .. }));

    // d∘d ≠ 0 must be caught and name the degree.
    let d0 = m(1, 1, &[1]);
    let d1 = m(1, 1, &[1]);
    let err = CochainComplex::new(vec![1, 1, 1], vec![d0, d1]).unwrap_err();
    match err {
        ChainError::InvalidComplex { degree, detail } => {
            assert_eq!(degree, 0);
            assert!(detail.contains("d ∘ d"));
        }
        other => panic!("unexpected error {other:?}"),
    }

    let err = CochainComplex::new(vec![1, 1], vec![]).unwrap_err();
    assert!(matches!(err, ChainError::InvalidComplex { .. }));
}

#[test]
fn random_complexes_match_planted_betti() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let len = 1 + (rand::Rng::gen_range(&mut rng, 0..4));
        let sample = random_complex(&mut rng, len);
        // Conjugation by unimodular matrices must not move the Betti
        // numbers planted in the staircase construction.
        assert_eq!(sample.complex.betti(), sample.betti);
        // Euler characteristic is basis-free as well.
        let alt: i64 = sample
            .betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(sample.complex.euler_characteristic(), alt);
    }
}

#[test]
fn dual_complex_reverses_betti() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let sample = random_complex(&mut rng, 3);
        let mut reversed = sample.betti.clone();
        reversed.reverse();
        assert_eq!(sample.complex.dual().betti(), reversed);
    }
}

#[test]
fn cohomology_basis_columns_are_independent_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let sample = random_complex(&mut rng, 3);
        let c = &sample.complex;
        let betti = c.betti();
        for (k, &expected) in betti.iter().enumerate() {
            let reps = c.cohomology_basis(k);
            assert_eq!(reps.cols(), expected);
            if let Some(d) = c.differential(k) {
                assert!(d.mul(&reps).is_zero(), "representatives must be cocycles");
            }
            assert_eq!(reps.rank(), betti[k], "representatives must be independent");
            // Classes stay independent modulo the image from below.
            let solver = c.cohomology_solver(k);
            let coords = solver.coordinates(&reps).expect("cocycles decompose");
            assert_eq!(coords.rank(), betti[k]);
        }
    }
}

#[test]
fn unimodular_matrices_are_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 0..5 {
        let q = random_unimodular(&mut rng, n);
        let inv = q.solve(&RationalMatrix::identity(n)).expect("invertible");
        assert_eq!(q.mul(&inv), RationalMatrix::identity(n));
    }
}

#[test]
fn ses_validation_names_degree_and_axiom() {
    // Middle complex ℚ →id ℚ, sub = top degree, quotient = bottom.
    let b = CochainComplex::new(vec![1, 1], vec![m(1, 1, &[1])]).unwrap();
    let a = CochainComplex::new(vec![0, 1], vec![m(1, 0, &[])]).unwrap();
    let c = CochainComplex::new(vec![1, 0], vec![m(0, 1, &[])]).unwrap();
    let f = vec![m(1, 0, &[]), m(1, 1, &[1])];
    let g = vec![m(1, 1, &[1]), m(0, 1, &[])];
    assert!(ComplexSes::new(a.clone(), b.clone(), c.clone(), f.clone(), g.clone()).is_ok());

    // Break injectivity of f at degree 1.
    let f_bad = vec![m(1, 0, &[]), m(1, 1, &[0])];
    let err = ComplexSes::new(a.clone(), b.clone(), c.clone(), f_bad, g.clone()).unwrap_err();
    match err {
        ChainError::InvalidSes { degree, detail } => {
            assert_eq!(degree, 1);
            assert!(detail.contains("injective"));
        }
        other => panic!("unexpected error {other:?}"),
    }

    // Break commutation: use a sub that is not preserved by d.
    let a_flip = CochainComplex::new(vec![1, 0], vec![m(0, 1, &[])]).unwrap();
    let f_flip = vec![m(1, 1, &[1]), m(1, 0, &[])];
    let err = ComplexSes::new(a_flip, b, c, f_flip, g).unwrap_err();
    match err {
        ChainError::InvalidSes { detail, .. } => assert!(detail.contains("commute")),
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn zigzag_elementary_connecting_isomorphism() {
    // 0 → (0 → ℚ) → (ℚ →id ℚ) → (ℚ → 0) → 0.  The middle complex is
    // acyclic, so the only way the long sequence can be exact is for the
    // connecting map H⁰(C) → H¹(A) to be an isomorphism.
    let b = CochainComplex::new(vec![1, 1], vec![m(1, 1, &[1])]).unwrap();
    let a = CochainComplex::new(vec![0, 1], vec![m(1, 0, &[])]).unwrap();
    let c = CochainComplex::new(vec![1, 0], vec![m(0, 1, &[])]).unwrap();
    let f = vec![m(1, 0, &[]), m(1, 1, &[1])];
    let g = vec![m(1, 1, &[1]), m(0, 1, &[])];
    let ses = ComplexSes::new(a, b, c, f, g).unwrap();

    let report = ses.zigzag();
    assert_eq!(report.betti_a, vec![0, 1]);
    assert_eq!(report.betti_b, vec![0, 0]);
    assert_eq!(report.betti_c, vec![1, 0]);
    assert_eq!(report.delta[0].rows(), 1);
    assert_eq!(report.delta[0].cols(), 1);
    assert_eq!(report.delta[0].rank(), 1, "connecting map must be bijective");
    assert!(report.exactness.is_exact());
    assert_eq!(report.sequence.dims(), &[0, 0, 1, 1, 0, 0]);
}

#[test]
fn zigzag_random_sequences_are_exact_with_predicted_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..25 {
        let len = 2 + rand::Rng::gen_range(&mut rng, 0..3);
        let sample = random_ses(&mut rng, len, false);
        let report = sample.ses.zigzag();
        assert_eq!(report.betti_a, sample.betti_a, "trial {trial}");
        assert_eq!(report.betti_b, sample.betti_b, "trial {trial}");
        assert_eq!(report.betti_c, sample.betti_c, "trial {trial}");
        assert!(report.exactness.is_exact(), "trial {trial}");
        for k in 0..len {
            assert_eq!(
                report.delta[k].rank(),
                sample.delta_ranks[k],
                "connecting rank at degree {k}, trial {trial}"
            );
        }
    }
}

#[test]
fn acyclic_middle_makes_every_connecting_map_bijective() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..15 {
        let sample = random_ses(&mut rng, 3, true);
        assert!(sample.betti_b.iter().all(|&b| b == 0));
        let report = sample.ses.zigzag();
        assert!(report.exactness.is_exact());
        for k in 0..2 {
            assert_eq!(report.delta[k].rows(), report.betti_a[k + 1]);
            assert_eq!(report.delta[k].cols(), report.betti_c[k]);
            assert_eq!(
                report.delta[k].rank(),
                report.betti_c[k],
                "connecting map must have full rank when the middle is acyclic"
            );
            assert_eq!(report.betti_a[k + 1], report.betti_c[k]);
        }
    }
}

#[test]
fn exactness_check_flags_failing_nodes() {
    // ℚ →0 ℚ is not exact anywhere: nothing maps onto either copy.
    let seq = ExactSequence::new(vec![1, 1], vec![m(1, 1, &[0])]).unwrap();
    let report = seq.check_exactness();
    assert!(!report.is_exact());
    assert_eq!(report.failing_nodes(), vec![0, 1]);

    // ℚ →id ℚ is exact at both ends.
    let seq = ExactSequence::new(vec![1, 1], vec![m(1, 1, &[1])]).unwrap();
    assert!(seq.check_exactness().is_exact());

    // 0 → ℚ → ℚ² → ℚ → 0 with inclusion then projection.
    let seq = ExactSequence::new(
        vec![1, 2, 1],
        vec![m(2, 1, &[1, 0]), m(1, 2, &[0, 1])],
    )
    .unwrap();
    assert!(seq.check_exactness().is_exact());

    // Same spaces, but the second map kills the complement instead:
    // composite is nonzero, so the middle node must fail.
    let seq = ExactSequence::new(
        vec![1, 2, 1],
        vec![m(2, 1, &[1, 0]), m(1, 2, &[1, 0])],
    )
    .unwrap();
    let report = seq.check_exactness();
    assert!(!report.is_exact());
    assert!(report.failing_nodes().contains(&1));
}
