mod common;

use common::*;
use majoranon::dynamics::evolve;
use majoranon::fields::{
    decompose_majorana, inner, norm, real_contract, real_expand, reconstruct, to_momentum,
    to_position,
};
use majoranon::{Backend, EquationKind, EvolveOptions, Sign};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = EquationKind> {
    prop_oneof![
        Just(EquationKind::Weyl),
        (0.0..3.0f64).prop_map(|m| EquationKind::Majorana { mass: m }),
        (-2.0..2.0f64, any::<bool>(), any::<bool>()).prop_map(|(m, a, b)| EquationKind::Dirac {
            mass: m,
            mass_sign: if a { Sign::Plus } else { Sign::Minus },
            kinetic_sign: if b { Sign::Plus } else { Sign::Minus },
        }),
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(d, m)| EquationKind::DiracMajorana {
            dirac_mass: d,
            majorana_mass: m,
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_round_trip(seed in any::<u64>()) {
        let psi = random_field(&grid1(16, 5.0), seed);
        let pair = decompose_majorana(&psi).unwrap();
        prop_assert!(reconstruct(&pair).unwrap().max_abs_diff(&psi).unwrap() <= 1e-14);
        prop_assert!(pair.majorana_residual().unwrap() <= 1e-15);
        let split = (norm(&pair.plus).powi(2) + norm(&pair.minus).powi(2)) / 2.0;
        prop_assert!((norm(&psi).powi(2) - split).abs() <= 1e-12);
    }

    #[test]
    fn majorana_inner_products_are_real(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = grid2(4, 2.0);
        let a = decompose_majorana(&random_field(&g, s1)).unwrap();
        let b = decompose_majorana(&random_field(&g, s2)).unwrap();
        prop_assert!(inner(&a.plus, &b.minus).unwrap().im.abs() <= 1e-14);
        prop_assert!(inner(&a.minus, &b.plus).unwrap().im.abs() <= 1e-14);
    }

    #[test]
    fn fourier_and_real_round_trips(seed in any::<u64>()) {
        let psi = random_field(&grid2(8, 6.0), seed);
        let hat = to_momentum(&psi).unwrap();
        prop_assert!((norm(&hat) - norm(&psi)).abs() <= 1e-12);
        prop_assert!(to_position(&hat).unwrap().max_abs_diff(&psi).unwrap() <= 1e-14);
        prop_assert!(real_contract(&real_expand(&psi).unwrap()).max_abs_diff(&psi).unwrap() == 0.0);
    }

    #[test]
    fn evolution_is_unitary_and_composes(
        seed in any::<u64>(),
        kind in kind_strategy(),
        t1 in 0.0..3.0f64,
        t2 in 0.0..3.0f64,
    ) {
        let psi = random_field(&grid1(16, 7.0), seed);
        let opts = EvolveOptions::default();
        for backend in Backend::ALL {
            let whole = evolve(&psi, &kind, backend, t1 + t2, &opts).unwrap().psi;
            prop_assert!((norm(&whole) - norm(&psi)).abs() <= 1e-12);
            let first = evolve(&psi, &kind, backend, t1, &opts).unwrap().psi;
            let both = evolve(&first, &kind, backend, t2, &opts).unwrap().psi;
            prop_assert!(whole.max_abs_diff(&both).unwrap() <= 1e-11);
            let back = evolve(&whole, &kind, backend, -(t1 + t2), &opts).unwrap().psi;
            prop_assert!(back.max_abs_diff(&psi).unwrap() <= 1e-11);
        }
    }

    #[test]
    fn backends_agree_on_random_fields(seed in any::<u64>(), kind in kind_strategy(), t in -4.0..4.0f64) {
        let psi = random_field(&grid2(6, 5.0), seed);
        let opts = EvolveOptions::default();
        let runs: Vec<_> = Backend::ALL
            .iter()
            .map(|&b| evolve(&psi, &kind, b, t, &opts).unwrap().psi)
            .collect();
        prop_assert!(runs[0].max_abs_diff(&runs[1]).unwrap() <= 1e-10);
        prop_assert!(runs[1].max_abs_diff(&runs[2]).unwrap() <= 1e-10);
    }
}

#[test]
fn evolution_is_linear_over_the_reals_only() {
    let g = grid1(16, 6.0);
    let a = random_field(&g, 1);
    let kind = EquationKind::Majorana { mass: 1.0 };
    let opts = EvolveOptions::default();
    let ev =
        |f: &majoranon::SpinorField| evolve(f, &kind, Backend::Expanded, 1.0, &opts).unwrap().psi;
    let two = a.scaled(2.0);
    assert!(ev(&two).max_abs_diff(&ev(&a).scaled(2.0)).unwrap() <= 1e-13);
    // multiplying by i does not commute with the ψ* term
    let values = a
        .values()
        .iter()
        .map(|s| s * num_complex::Complex64::i())
        .collect();
    let ia = majoranon::SpinorField::new(a.grid_arc().clone(), values, majoranon::Space::Position)
        .unwrap();
    let lhs = ev(&ia);
    let rhs_values: Vec<_> = ev(&a)
        .values()
        .iter()
        .map(|s| s * num_complex::Complex64::i())
        .collect();
    let rhs =
        majoranon::SpinorField::new(a.grid_arc().clone(), rhs_values, majoranon::Space::Position)
            .unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() > 1e-3);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let psi = random_field(&grid2(16, 8.0), 99);
    let kind = EquationKind::DiracMajorana {
        dirac_mass: 0.7,
        majorana_mass: 0.4,
    };
    for backend in [Backend::Decomposed, Backend::Expanded] {
        let on = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| {
                    evolve(&psi, &kind, backend, 2.0, &EvolveOptions::default())
                        .unwrap()
                        .psi
                })
        };
        assert_eq!(on(1), on(3));
    }
}
