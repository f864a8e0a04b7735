//! Acceptance suite: every numbered check prints one pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the full
//! list. The checks pin the behaviour the library promises: certified
//! strong gradings, closed-form sheaf cohomology, exact cartesian
//! sequences, twist compatibility, acyclicity detection, stable
//! hypercohomology truncation, the section adjunction, split classes,
//! Euler additivity, and the crossed-product obstruction.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use p1k_core::{
    additivity_check, adjunction_check, apply_pairing, cartesian_sequence, coh_object,
    component_class, component_pairing, cone, crossed_product_witness, gamma, hypercoh,
    hypercoh_windowed, is_acyclic, is_strongly_graded, psi, random_complex, random_isomorphism,
    random_nonnegative_complex, sections_complex, split_k0, split_k0_alt, twist_theorem_check,
    verify_splitting, CrossedProductWitness, FieldTag, GradedRing, K0Class, K0Pair,
    R0FreeComplex, RingElement, SheafComplex, StrongGrading, TwistSum,
};

fn strong_models() -> Vec<(&'static str, Arc<GradedRing>)> {
    vec![
        ("laurent", GradedRing::laurent(FieldTag::Q).unwrap()),
        ("checkerboard", GradedRing::checkerboard(FieldTag::Q).unwrap()),
        ("twisted_laurent_4", GradedRing::twisted_laurent(4).unwrap()),
    ]
}

fn checkerboard_weight(n: i64) -> usize {
    if n.rem_euclid(2) == 0 {
        5
    } else {
        4
    }
}

fn band_sum(lo: i64, hi: i64, weight: impl Fn(i64) -> usize) -> usize {
    (lo..=hi).map(weight).sum()
}

/// Free complex 0 -> R0 -> R0^2 -> 0 with both differential entries 1.
fn two_step_free(ring: &Arc<GradedRing>) -> R0FreeComplex {
    let unit = RingElement::unit(ring);
    let ranks = BTreeMap::from([(0i64, 2usize), (1, 1)]);
    let diffs = BTreeMap::from([(1i64, vec![vec![unit.clone()], vec![unit]])]);
    R0FreeComplex::new(ring, ranks, diffs).unwrap()
}

fn rank_two_point(ring: &Arc<GradedRing>) -> R0FreeComplex {
    R0FreeComplex::new(ring, BTreeMap::from([(0i64, 2usize)]), BTreeMap::new()).unwrap()
}

/// Alternating sum of the level ranks times the class of R0.
fn free_complex_class(c: &R0FreeComplex) -> K0Class {
    let base = component_class(c.ring(), 0).unwrap();
    let mut out = K0Class::zero(base.0.len());
    for (&n, &r) in c.ranks() {
        let term = K0Class(base.0.iter().map(|v| v * r as i64).collect());
        out = if n.rem_euclid(2) == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

fn criterion_1_strong_grading_certificates() {
    for (name, ring) in strong_models() {
        match is_strongly_graded(&ring).unwrap() {
            StrongGrading::Certificate { pos, neg } => {
                assert_eq!(pos.degree, 1, "{name}");
                assert_eq!(neg.degree, -1, "{name}");
                assert!(pos.verify().unwrap(), "{name}");
                assert!(neg.verify().unwrap(), "{name}");
            }
            StrongGrading::Refuted { degree } => {
                panic!("{name} unexpectedly refuted at k={degree}")
            }
        }
    }
    let poly = GradedRing::polynomial(FieldTag::Q).unwrap();
    match is_strongly_graded(&poly).unwrap() {
        StrongGrading::Refuted { degree } => assert_eq!(degree, -1),
        StrongGrading::Certificate { .. } => panic!("polynomial ring is not strongly graded"),
    }
}

fn criterion_2_closed_form_cohomology() {
    let laurent = GradedRing::laurent(FieldTag::Q).unwrap();
    let cb = GradedRing::checkerboard(FieldTag::Q).unwrap();
    let mut cells = 0;
    for k in -5..=5 {
        for l in -5..=5 {
            let (h0, h1) = coh_object(&laurent, k, l).unwrap();
            assert_eq!(h0.dim() as i64, (k + l + 1).max(0), "laurent h0 at ({k},{l})");
            assert_eq!(h1.dim() as i64, (-(k + l) - 1).max(0), "laurent h1 at ({k},{l})");
            let (h0, h1) = coh_object(&cb, k, l).unwrap();
            assert_eq!(h0.dim(), band_sum(-l, k, checkerboard_weight), "cb h0 at ({k},{l})");
            assert_eq!(
                h1.dim(),
                band_sum(k + 1, -l - 1, checkerboard_weight),
                "cb h1 at ({k},{l})"
            );
            cells += 1;
        }
    }
    assert_eq!(cells, 121);
}

fn criterion_3_cartesian_exactness() {
    for (name, ring) in strong_models() {
        for k in -3..=3 {
            for l in -3..=3 {
                let (_, exact) = cartesian_sequence(&ring, k, l).unwrap();
                assert!(exact, "{name} cartesian sequence not exact at ({k},{l})");
            }
        }
    }
}

fn criterion_4_twist_compatibility() {
    for (name, ring) in strong_models() {
        for a in -2..=2 {
            for b in -2..=2 {
                let y = SheafComplex::single(&ring, 0, a, b);
                for k in -3..=3 {
                    assert!(
                        twist_theorem_check(&y, k).unwrap(),
                        "{name} twist mismatch at O({a},{b}), k={k}"
                    );
                }
            }
        }
    }
}

fn criterion_5_acyclicity_detection() {
    for (name, ring) in strong_models() {
        let mut cones_confirmed = 0;
        let mut singles_rejected = 0;
        for seed in 0..50u64 {
            let x = random_nonnegative_complex(&ring, 2, 2, (0, 2), seed).unwrap();
            let c = cone(&random_isomorphism(&x, seed ^ 0x5eed).unwrap()).unwrap();
            assert!(is_acyclic(&c).unwrap().holds, "{name} cone seed {seed}");
            for a in -1..=1 {
                for b in -1..=1 {
                    let res = hypercoh(&c.twist(a, b)).unwrap();
                    assert!(res.dims.is_empty(), "{name} cone seed {seed} twist ({a},{b})");
                }
            }
            cones_confirmed += 1;

            let k = (seed % 3) as i64;
            let l = ((seed / 3) % 4) as i64 - 1;
            let single = SheafComplex::single(&ring, 0, k, l.max(-k));
            assert!(!is_acyclic(&single).unwrap().holds, "{name} single seed {seed}");
            singles_rejected += 1;
        }
        assert_eq!((cones_confirmed, singles_rejected), (50, 50), "{name}");
    }
}

fn criterion_6_truncation_stability() {
    for (name, ring) in strong_models() {
        for seed in 0..30u64 {
            let y = random_nonnegative_complex(&ring, 2, 2, (0, 3), seed).unwrap();
            let res = hypercoh(&y).unwrap();
            let module_side = gamma(&y).unwrap().homology_dims();
            assert_eq!(res.dims, module_side, "{name} seed {seed}");
            let enlarged =
                hypercoh_windowed(&y, (res.window.0 - 4, res.window.1 + 4), 32).unwrap();
            assert_eq!(enlarged.dims, res.dims, "{name} seed {seed} enlarged window");
        }
    }
}

fn criterion_7_adjunction_and_vanishing() {
    for (name, ring) in strong_models() {
        for i in 0..10u64 {
            let rank = 1 + (i % 2) as usize;
            let summands: Vec<(i64, i64)> = (0..=(i % 2))
                .map(|j| {
                    let k = ((7 * i + 3 * j + 3) % 5) as i64 - 2;
                    let l = ((11 * i + 5 * j + 5) % 5) as i64 - 2;
                    (k, l)
                })
                .collect();
            let sum = TwistSum::new(summands);
            assert!(adjunction_check(&ring, rank, &sum).unwrap(), "{name} pair {i}");
        }

        for c in [R0FreeComplex::point(&ring), two_step_free(&ring), rank_two_point(&ring)] {
            let image = psi(-1, 0, &c).unwrap();
            for s in -2..=2 {
                for t in -2..=2 {
                    let twisted = image.twist(s, t);
                    if s + t <= 0 {
                        let sections = sections_complex(&twisted).unwrap();
                        assert!(
                            sections.homology_dims().is_empty(),
                            "{name} H0 of image survives twist ({s},{t})"
                        );
                    }
                    if s + t >= 0 {
                        let (_, h1) = coh_object(&ring, s - 1, t).unwrap();
                        assert_eq!(h1.dim(), 0, "{name} H1 of image survives twist ({s},{t})");
                    }
                }
            }
        }
    }
}

fn criterion_8_split_classes() {
    for (name, ring) in strong_models() {
        let zero = K0Class::zero(component_class(&ring, 0).unwrap().0.len());
        let c = two_step_free(&ring);
        let pair = split_k0(&psi(-1, 0, &c).unwrap()).unwrap();
        assert_eq!(pair, K0Pair { c: free_complex_class(&c), d: zero.clone() }, "{name}");
        let alt = split_k0_alt(&psi(0, -1, &c).unwrap()).unwrap();
        assert_eq!(alt, K0Pair { c: free_complex_class(&c), d: zero.clone() }, "{name}");
        let d = rank_two_point(&ring);
        let pair = split_k0(&psi(0, 0, &d).unwrap()).unwrap();
        assert_eq!(pair, K0Pair { c: zero, d: free_complex_class(&d) }, "{name}");

        for seed in 0..20u64 {
            let y = random_nonnegative_complex(&ring, 2, 2, (0, 2), seed).unwrap();
            let report = verify_splitting(&y, (-3, 3, -3, 3)).unwrap();
            assert!(report.all_pass(), "{name} seed {seed}: {}", report.to_text());
        }
    }

    let laurent = GradedRing::laurent(FieldTag::Q).unwrap();
    let y = SheafComplex::single(&laurent, 0, 2, 1);
    let pair = split_k0(&y).unwrap();
    assert_eq!(pair, K0Pair { c: K0Class(vec![-3]), d: K0Class(vec![4]) });
    let report = verify_splitting(&y, (-3, 3, -3, 3)).unwrap();
    assert_eq!((report.passed(), report.total()), (49, 49));
}

fn criterion_9_euler_additivity() {
    for (name, ring) in strong_models() {
        for k in -3..=3 {
            for l in -3..=3 {
                let y = SheafComplex::single(&ring, 0, k, l);
                assert!(additivity_check(&y).unwrap(), "{name} single ({k},{l})");
            }
        }
        for seed in 0..20u64 {
            let y = random_complex(&ring, 2, 2, (-2, 2), seed).unwrap();
            assert!(additivity_check(&y).unwrap(), "{name} seed {seed}");
        }
    }
}

fn criterion_10_crossed_product_obstruction() {
    let cb = GradedRing::checkerboard(FieldTag::Q).unwrap();
    assert!(is_strongly_graded(&cb).unwrap().is_certified());
    match crossed_product_witness(&cb).unwrap() {
        CrossedProductWitness::NonexistenceByDimension { dim_r0, dim_r1 } => {
            assert_eq!((dim_r0, dim_r1), (5, 4));
        }
        other => panic!("expected dimension obstruction, got {other:?}"),
    }
    // the pairing that would have to be invertible for a crossed product
    let p = component_pairing(&cb, 1).unwrap();
    let moved = apply_pairing(&component_class(&cb, 0).unwrap(), &p);
    assert_ne!(moved, component_class(&cb, 0).unwrap());
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn())> = vec![
        ("strong grading certificates", criterion_1_strong_grading_certificates),
        ("closed form cohomology", criterion_2_closed_form_cohomology),
        ("cartesian exactness", criterion_3_cartesian_exactness),
        ("twist compatibility", criterion_4_twist_compatibility),
        ("acyclicity detection", criterion_5_acyclicity_detection),
        ("truncation stability", criterion_6_truncation_stability),
        ("adjunction and vanishing", criterion_7_adjunction_and_vanishing),
        ("split classes", criterion_8_split_classes),
        ("euler additivity", criterion_9_euler_additivity),
        ("crossed product obstruction", criterion_10_crossed_product_obstruction),
    ];
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(()) => println!("criterion {:2} ({name}): pass", i + 1),
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| payload.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                println!("criterion {:2} ({name}): FAIL - {msg}", i + 1);
                failures.push(format!("{} ({name})", i + 1));
            }
        }
    }
    std::panic::set_hook(default_hook);
    assert!(failures.is_empty(), "failed criteria: {}", failures.join(", "));
}
