//! Randomised invariants: linear algebra laws, graded ring axioms,
//! cohomology band counts, and functoriality of the complex operations.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use p1k_core::{
    check_lemma_q0, cone, euler, gamma, hypercoh, is_acyclic, partition_of_unity, random_complex,
    random_isomorphism, random_nonnegative_complex, split_k0, verify_splitting, FieldTag,
    GradedRing, Matrix, RingElement, Scalar,
};

fn models() -> &'static [Arc<GradedRing>] {
    static CELL: OnceLock<Vec<Arc<GradedRing>>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            GradedRing::laurent(FieldTag::Q).unwrap(),
            GradedRing::checkerboard(FieldTag::Fp(5)).unwrap(),
            GradedRing::twisted_laurent(4).unwrap(),
        ]
    })
}

fn tag_of(choice: u8) -> FieldTag {
    match choice % 3 {
        0 => FieldTag::Q,
        1 => FieldTag::Fp(5),
        _ => FieldTag::Fp(7),
    }
}

fn matrix_from(tag: FieldTag, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    Matrix::from_fn(tag, rows, cols, |r, c| {
        Scalar::from_i64(tag, entries[(r * cols + c) % entries.len()])
    })
}

fn element_from(ring: &Arc<GradedRing>, n: i64, raw: &[i64]) -> RingElement {
    let dim = ring.dim(n).unwrap();
    let coeffs =
        (0..dim).map(|i| Scalar::from_i64(ring.field(), raw[i % raw.len()])).collect();
    RingElement::homogeneous(ring, n, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_invariant_under_transpose(
        tag_choice in 0u8..3,
        rows in 1usize..=5,
        cols in 1usize..=5,
        entries in prop::collection::vec(-4i64..=4, 25),
    ) {
        let tag = tag_of(tag_choice);
        let a = matrix_from(tag, rows, cols, &entries);
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(a.rank() + a.nullity(), cols);
    }

    #[test]
    fn kernel_columns_are_annihilated(
        tag_choice in 0u8..3,
        rows in 1usize..=5,
        cols in 1usize..=5,
        entries in prop::collection::vec(-4i64..=4, 25),
    ) {
        let tag = tag_of(tag_choice);
        let a = matrix_from(tag, rows, cols, &entries);
        let ker = a.kernel();
        prop_assert_eq!(ker.cols(), a.nullity());
        prop_assert!(a.mul(&ker).is_zero());
        prop_assert_eq!(ker.rank(), ker.cols());
    }

    #[test]
    fn product_rank_is_bounded_by_factors(
        tag_choice in 0u8..3,
        m in 1usize..=4,
        inner in 1usize..=4,
        n in 1usize..=4,
        left in prop::collection::vec(-4i64..=4, 16),
        right in prop::collection::vec(-4i64..=4, 16),
    ) {
        let tag = tag_of(tag_choice);
        let a = matrix_from(tag, m, inner, &left);
        let b = matrix_from(tag, inner, n, &right);
        prop_assert!(a.mul(&b).rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn solve_recovers_a_preimage(
        tag_choice in 0u8..3,
        m in 1usize..=4,
        n in 1usize..=4,
        entries in prop::collection::vec(-4i64..=4, 16),
        xs in prop::collection::vec(-3i64..=3, 4),
    ) {
        let tag = tag_of(tag_choice);
        let a = matrix_from(tag, m, n, &entries);
        let x: Vec<Scalar> = (0..n).map(|i| Scalar::from_i64(tag, xs[i])).collect();
        let b = a.apply(&x);
        let solved = a.solve(&b).unwrap();
        prop_assert!(solved.is_some());
        prop_assert_eq!(a.apply(&solved.unwrap()), b);
    }

    #[test]
    fn homogeneous_multiplication_is_associative(
        ix in 0usize..3,
        na in -2i64..=2,
        nb in -2i64..=2,
        nc in -2i64..=2,
        raw in prop::collection::vec(-3i64..=3, 15),
    ) {
        let ring = &models()[ix];
        let x = element_from(ring, na, &raw[0..5]);
        let y = element_from(ring, nb, &raw[5..10]);
        let z = element_from(ring, nc, &raw[10..15]);
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        let unit = RingElement::unit(ring);
        prop_assert_eq!(x.mul(&unit).unwrap(), x.clone());
        prop_assert_eq!(unit.mul(&x).unwrap(), x);
    }

    #[test]
    fn partitions_of_unity_verify_in_every_probed_degree(
        ix in 0usize..3,
        k in -3i64..=3,
    ) {
        let ring = &models()[ix];
        let pou = partition_of_unity(ring, k).unwrap();
        prop_assert!(pou.is_some());
        let pou = pou.unwrap();
        prop_assert_eq!(pou.degree, k);
        prop_assert!(pou.verify().unwrap());
    }

    #[test]
    fn cohomology_dimensions_are_band_sums(
        ix in 0usize..3,
        k in -5i64..=5,
        l in -5i64..=5,
    ) {
        let ring = &models()[ix];
        let (h0, h1) = p1k_core::coh_object(ring, k, l).unwrap();
        let band = |lo: i64, hi: i64| -> usize {
            (lo..=hi).map(|n| ring.dim(n).unwrap()).sum()
        };
        prop_assert_eq!(h0.dim(), band(-l, k));
        prop_assert_eq!(h1.dim(), band(k + 1, -l - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twisting_composes_additively(
        ix in 0usize..3,
        seed in 0u64..1000,
        a in -2i64..=2,
        b in -2i64..=2,
        c in -2i64..=2,
        d in -2i64..=2,
    ) {
        let ring = &models()[ix];
        let y = random_complex(ring, 2, 2, (-2, 2), seed).unwrap();
        prop_assert_eq!(y.twist(a, b).twist(c, d), y.twist(a + c, b + d));
        prop_assert_eq!(y.twist(0, 0), y);
    }

    #[test]
    fn shifting_relabels_hypercohomology(
        ix in 0usize..3,
        seed in 0u64..1000,
        s in -2i64..=2,
    ) {
        let ring = &models()[ix];
        let y = random_complex(ring, 2, 1, (-1, 2), seed).unwrap();
        let plain = hypercoh(&y).unwrap().dims;
        let shifted = hypercoh(&y.shift(s)).unwrap().dims;
        let relabelled: std::collections::BTreeMap<i64, usize> =
            plain.iter().map(|(&n, &v)| (n + s, v)).collect();
        prop_assert_eq!(shifted, relabelled);
    }

    #[test]
    fn euler_classes_add_over_direct_sums(
        ix in 0usize..3,
        s1 in 0u64..1000,
        s2 in 0u64..1000,
        k in 0i64..=2,
        l in 0i64..=2,
    ) {
        let ring = &models()[ix];
        let x = random_nonnegative_complex(ring, 2, 2, (0, 2), s1).unwrap();
        let y = random_nonnegative_complex(ring, 2, 2, (0, 2), s2).unwrap();
        let sum = x.direct_sum(&y).unwrap();
        prop_assert_eq!(euler(&sum, k, l).unwrap(), euler(&x, k, l).unwrap().add(&euler(&y, k, l).unwrap()));
    }

    #[test]
    fn cones_of_isomorphisms_are_acyclic(
        ix in 0usize..3,
        s1 in 0u64..1000,
        s2 in 0u64..1000,
    ) {
        let ring = &models()[ix];
        let x = random_nonnegative_complex(ring, 2, 2, (0, 2), s1).unwrap();
        let f = random_isomorphism(&x, s2).unwrap();
        prop_assert!(is_acyclic(&cone(&f).unwrap()).unwrap().holds);
        let general = random_complex(ring, 2, 2, (-2, 2), s1).unwrap();
        let g = random_isomorphism(&general, s2).unwrap();
        prop_assert!(check_lemma_q0(&g, 0, (-2, 2)).unwrap());
    }

    #[test]
    fn hypercohomology_agrees_with_sections_for_nonnegative_complexes(
        ix in 0usize..3,
        seed in 0u64..1000,
    ) {
        let ring = &models()[ix];
        let y = random_nonnegative_complex(ring, 2, 2, (0, 2), seed).unwrap();
        prop_assert_eq!(hypercoh(&y).unwrap().dims, gamma(&y).unwrap().homology_dims());
    }

    #[test]
    fn split_classes_reproduce_twisted_euler_characteristics(
        ix in 0usize..3,
        seed in 0u64..1000,
    ) {
        let ring = &models()[ix];
        let y = random_nonnegative_complex(ring, 2, 2, (0, 2), seed).unwrap();
        let pair = split_k0(&y).unwrap();
        prop_assert_eq!(euler(&y, 0, 0).unwrap(), pair.d);
        prop_assert!(verify_splitting(&y, (-1, 1, -1, 1)).unwrap().all_pass());
    }
}
