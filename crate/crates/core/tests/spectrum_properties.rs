//! Invariants of the single-particle spectrum and the equilibrium functions.

use std::f64::consts::{LN_2, PI};

use approx::assert_abs_diff_eq;
use lrk_core::spectrum::{momentum_grid, winding_number, ModeTable, PairingWeights};
use lrk_core::thermo::thermo_state;
use lrk_core::{
    build_spectrum, entropy, free_energy, internal_energy, log_partition, pairing_function,
    quasiparticle_energy, ChainParams, InteractionRange, InverseTemperature,
};
use proptest::prelude::*;

fn range() -> impl Strategy<Value = InteractionRange> {
    prop_oneof![
        (0.1f64..8.0).prop_map(InteractionRange::PowerLaw),
        Just(InteractionRange::ShortRange),
    ]
}

fn chain() -> impl Strategy<Value = ChainParams> {
    (1usize..=64, 0.2f64..2.0, 0.2f64..2.0, -3.0f64..3.0, range())
        .prop_map(|(half, j, d, mu, r)| ChainParams::new(2 * half, j, d, mu, r).unwrap())
}

proptest! {
    #[test]
    fn pairing_is_odd(p in chain(), k in -PI..PI) {
        let w = PairingWeights::new(&p).unwrap();
        prop_assert!((w.eval(-k) + w.eval(k)).abs() <= 1e-12 * (1.0 + w.eval(k).abs()));
    }

    #[test]
    fn pairing_table_matches_literal_sum(p in chain()) {
        let table = ModeTable::new(&p).unwrap();
        for (k, f) in table.grid().k_positive().iter().zip(table.pairing()) {
            let direct = pairing_function(*k, &p).unwrap();
            prop_assert!((direct - f).abs() <= 1e-11 * (1.0 + f.abs()), "k={k} {direct} vs {f}");
        }
    }

    #[test]
    fn energies_nonnegative_and_even(p in chain()) {
        let s = build_spectrum(&p).unwrap();
        for (k, e) in momentum_grid(p.sites).unwrap().k_positive().iter().zip(s.energies()) {
            prop_assert!(*e >= 0.0);
            let minus = quasiparticle_energy(-k, &p).unwrap();
            prop_assert!((minus - e).abs() <= 1e-12 * (1.0 + e));
        }
        let levels = s.levels();
        let n = levels.len();
        for i in 0..n / 2 {
            prop_assert_eq!(levels[i], -levels[n - 1 - i]);
        }
    }

    #[test]
    fn thermo_bounds(p in chain(), b in 0.0f64..20.0) {
        let s = build_spectrum(&p).unwrap();
        let beta = InverseTemperature::new(b).unwrap();
        let st = thermo_state(&s, beta);
        let max_s = p.sites as f64 * LN_2;
        prop_assert!(st.entropy >= 0.0 && st.entropy <= max_s + 1e-12);
        prop_assert!(st.internal_energy <= 0.0);
        prop_assert!(st.log_z >= max_s - 1e-12);
        // S = ln Z + beta U.
        let scale = st.log_z.abs().max(1.0);
        prop_assert!((st.entropy - (st.log_z + b * st.internal_energy)).abs() <= 1e-10 * scale);
        if b > 0.0 {
            let f = free_energy(&s, beta).unwrap();
            prop_assert!((f - (st.internal_energy - st.entropy / b)).abs() <= 1e-10 * scale / b);
        }
    }

    #[test]
    fn entropy_decreases_with_beta(p in chain(), b in 0.0f64..10.0, db in 0.01f64..2.0) {
        let s = build_spectrum(&p).unwrap();
        let lo = InverseTemperature::new(b).unwrap();
        let hi = InverseTemperature::new(b + db).unwrap();
        prop_assert!(entropy(&s, hi) <= entropy(&s, lo) + 1e-12);
        prop_assert!(internal_energy(&s, hi) <= internal_energy(&s, lo) + 1e-12);
        prop_assert!(log_partition(&s, hi) >= log_partition(&s, lo) - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Away from the boundaries |mu| = |J| the winding is a half-integer and
    /// doubling the sampling does not change it.
    #[test]
    fn winding_quantised_and_stable(
        mu in prop_oneof![-3.0f64..-1.2, -0.8f64..0.8, 1.2f64..3.0],
        alpha in 1.2f64..8.0,
    ) {
        let p = ChainParams::unit(200, mu, InteractionRange::PowerLaw(alpha)).unwrap();
        let coarse = winding_number(&p, 20_000).unwrap();
        let fine = winding_number(&p, 40_000).unwrap();
        prop_assert!(coarse.residual < 1e-3);
        prop_assert_eq!((2.0 * coarse.w).round(), (2.0 * fine.w).round());
        let expected = if mu.abs() < 1.0 { 1.0 } else { 0.0 };
        prop_assert!((coarse.w - expected).abs() < 1e-3, "w={}", coarse.w);
    }
}

#[test]
fn short_range_limit_is_the_large_alpha_limit() {
    for sites in [4, 8, 64, 200] {
        let sr =
            build_spectrum(&ChainParams::unit(sites, 0.7, InteractionRange::ShortRange).unwrap())
                .unwrap();
        let lr = build_spectrum(
            &ChainParams::unit(sites, 0.7, InteractionRange::PowerLaw(60.0)).unwrap(),
        )
        .unwrap();
        for (a, b) in sr.energies().iter().zip(lr.energies()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}
