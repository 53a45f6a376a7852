use proptest::prelude::*;
use symqent::majorana::in_domain_s;
use symqent::random::{random_mu_interior, random_slocc, random_state, random_unitary, seeded};
use symqent::reduced::{DEFAULT_ANTICOHERENCE_TOL, DEFAULT_MES_TOL};
use symqent::{
    anticoherence_order, apply_symmetric_op, barycentric_measure, canonicalize4, catalog,
    geometric_measure, is_mes, make_state, n_tangle, rho_t, roots, state_from_roots, GmeConfig,
    SymState, C64,
};

fn coeffs(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
        .prop_filter("nonzero", |v: &Vec<C64>| v.iter().any(|c| c.norm() > 1e-3))
}

fn state(max_n: usize) -> impl Strategy<Value = SymState> {
    (1..=max_n).prop_flat_map(|n| coeffs(n).prop_map(move |d| make_state(n, &d).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reductions_are_density_matrices(s in state(10)) {
        for t in 1..s.n() {
            let rho = rho_t(&s, t).unwrap();
            prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
            prop_assert!(rho.hermitian_defect() < 1e-13);
            prop_assert!(rho.eigenvalues()[0] >= -1e-10);
        }
    }

    #[test]
    fn mes_and_order_are_lu_invariant(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = seeded(seed);
        let mut d = vec![C64::new(0.0, 0.0); n + 1];
        d[0] = C64::new(1.0, 0.0);
        d[n] = C64::new(1.0, 0.0);
        for s in [make_state(n, &d).unwrap(), random_state(n, &mut rng)] {
            let u = random_unitary(&mut rng);
            let moved = apply_symmetric_op(&s, &u).unwrap();
            prop_assert_eq!(
                is_mes(&s, DEFAULT_MES_TOL).is_mes,
                is_mes(&moved, DEFAULT_MES_TOL).is_mes
            );
            prop_assert_eq!(
                anticoherence_order(&s, DEFAULT_ANTICOHERENCE_TOL).order,
                anticoherence_order(&moved, DEFAULT_ANTICOHERENCE_TOL).order
            );
        }
    }

    #[test]
    fn order_is_at_most_half(s in state(10)) {
        prop_assert!(anticoherence_order(&s, DEFAULT_ANTICOHERENCE_TOL).order <= s.n() / 2);
    }

    #[test]
    fn roots_round_trip(s in state(10)) {
        let set = roots(&s).unwrap();
        prop_assert_eq!(set.roots.len(), s.n());
        let back = state_from_roots(&set).unwrap();
        let f = back.fidelity(&s).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-8, "fidelity {}", f);
    }

    #[test]
    fn barycentric_in_unit_interval(s in state(12)) {
        let e = barycentric_measure(&s).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&e));
    }

    #[test]
    fn tangle_is_lu_invariant(seed in any::<u64>(), half in 1usize..6) {
        let mut rng = seeded(seed);
        let s = random_state(2 * half, &mut rng);
        let moved = apply_symmetric_op(&s, &random_unitary(&mut rng)).unwrap();
        let a = n_tangle(&s).unwrap().value;
        let b = n_tangle(&moved).unwrap().value;
        prop_assert!((a - b).abs() < 1e-11);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn canonical_mu_lands_in_s(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let mu = random_mu_interior(0.02, &mut rng);
        let s = catalog("psi_mu", 4, &[mu]).unwrap();
        let scrambled = apply_symmetric_op(&s, &random_slocc(20.0, &mut rng)).unwrap();
        let r = canonicalize4(&scrambled).unwrap();
        prop_assert!(r.in_s);
        prop_assert!(in_domain_s(r.mu, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geometric_measure_is_lu_invariant(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = seeded(seed);
        let s = random_state(n, &mut rng);
        let moved = apply_symmetric_op(&s, &random_unitary(&mut rng)).unwrap();
        let cfg = GmeConfig::default();
        let a = geometric_measure(&s, &cfg).value;
        let b = geometric_measure(&moved, &cfg).value;
        prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
        prop_assert!((0.0..1.0).contains(&a));
    }
}
