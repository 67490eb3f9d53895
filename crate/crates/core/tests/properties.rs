use complex_chaos::chaos::{certify_product, certify_product_conjugated, integral_conjugate, isometry_check};
use complex_chaos::kernels::{ContractionSpec, Kernel};
use complex_chaos::montecarlo::{estimate, SamplePlan};
use complex_chaos::random::{case_rng, random_kernel};
use complex_chaos::{expand, oracle};
use num_complex::Complex64;
use proptest::prelude::*;

/// `(p, q, n, seed)` with `p + q <= max_order`.
fn shape(max_order: usize, max_cells: usize) -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (0..=max_order).prop_flat_map(move |p| (Just(p), 0..=max_order - p, 1..=max_cells, any::<u64>()))
}

fn kernel((p, q, n, seed): (usize, usize, usize, u64)) -> Kernel {
    random_kernel(p, q, n, &mut case_rng(seed, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_ignores_symmetrization(s in shape(4, 3)) {
        let f = kernel(s);
        let d = expand(&f).unwrap().max_deviation(&expand(&f.ito_symmetrize()).unwrap());
        prop_assert!(d <= 1e-12);
    }

    #[test]
    fn symmetrization_is_idempotent(s in shape(4, 3)) {
        let f = kernel(s).ito_symmetrize();
        prop_assert!(f.max_deviation(&f.ito_symmetrize()).unwrap() <= 1e-15);
        prop_assert!(f.ito_symmetrize().norm() <= kernel(s).norm() + 1e-12);
    }

    #[test]
    fn reversed_conjugate_is_an_involution(s in shape(5, 3)) {
        let f = kernel(s);
        prop_assert_eq!(f.reversed_conjugate().reversed_conjugate(), f.clone());
        prop_assert!(integral_conjugate(&f).unwrap().pass);
    }

    #[test]
    fn isometry_holds(s in shape(4, 3)) {
        prop_assert!(isometry_check(&kernel(s)).unwrap().pass);
    }

    #[test]
    fn expectation_commutes_with_conjugation(s in shape(4, 2)) {
        let p = expand(&kernel(s)).unwrap();
        let q = &p * &p;
        let lhs = oracle::expectation(&q.conj());
        let rhs = oracle::expectation(&q).conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert!(oracle::second_moment(&p) >= 0.0);
    }

    #[test]
    fn contraction_with_itself_has_bounded_norm(s in shape(3, 3), i in 0usize..3, j in 0usize..3) {
        // Cauchy-Schwarz: |f (x)_{i,j} g| <= |f| |g|.
        let f = kernel(s);
        let g = kernel((s.1, s.0, s.2, s.3 ^ 1));
        let c = f.contract(&g, ContractionSpec::new(i, j)).unwrap();
        prop_assert!(c.norm() <= f.norm() * g.norm() + 1e-12);
    }

    #[test]
    fn product_formulas_hold(l in shape(3, 2), r in 0usize..=3, seed in any::<u64>()) {
        let f = kernel(l);
        let g = random_kernel(r, 3 - r, l.2, &mut case_rng(seed, 1)).unwrap();
        prop_assert!(certify_product(&f, &g, 1e-9).unwrap().pass);
        prop_assert!(certify_product_conjugated(&f, &g, 1e-9).unwrap().pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn estimates_are_reproducible(seed in any::<u64>(), samples in 2usize..10_000) {
        let plan = SamplePlan::new(seed, samples, 2).unwrap();
        let p = expand(&Kernel::elementary(1, 1, 2, &[0, 1], Complex64::new(1.0, 0.0)).unwrap()).unwrap();
        let a = estimate(&p, plan).unwrap();
        prop_assert_eq!(a, estimate(&p, plan).unwrap());
        prop_assert!(a.std_error >= 0.0);
    }
}
