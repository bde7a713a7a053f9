use covtime_core::airy::{minimal_state, scaling_transform, verify_min_identity_chain};
use covtime_core::model::{
    build_unitary_group, phase_profile, validate_povm, vector_generated_povm, EnergyGrid, StateVector,
};
use covtime_core::numerics::norm;
use covtime_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

#[test]
fn identity_chain_ten_thousand_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dist = Uniform::new(1e-3, 10.0).unwrap();
    let a: Vec<f64> = (0..10_000).map(|_| dist.sample(&mut rng)).collect();
    let b: Vec<f64> = (0..10_000).map(|_| dist.sample(&mut rng)).collect();
    let report = verify_min_identity_chain(&a, &b).unwrap();
    assert_eq!(report.failures(), 0);
    assert!(report.worst_floor_gap() >= -1e-12);
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateVector::normalized(
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law(s in -20.0f64..20.0, t in -20.0f64..20.0, seed in 0u64..1000) {
        let grid = EnergyGrid::full_line(32, 0.4).unwrap();
        let u = build_unitary_group(&grid);
        let psi = random_state(32, seed);
        let two = u.evolve(s, &u.evolve(t, &psi));
        let one = u.evolve(s + t, &psi);
        let diff: Vec<Complex64> = two.amplitudes().iter().zip(one.amplitudes()).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&diff) <= 1e-12);
    }

    #[test]
    fn vector_generated_povms_validate(phases in prop::collection::vec(0.0f64..6.3, 12)) {
        let grid = EnergyGrid::full_line(12, EnergyGrid::balanced_spacing(12)).unwrap();
        let f = vector_generated_povm(&grid, &phase_profile(&phases)).unwrap();
        prop_assert!(validate_povm(&f.to_dense()).passed());
    }

    #[test]
    fn mean_energy_is_diagonal_expectation(seed in 0u64..1000, offset in -5.0f64..5.0) {
        let grid = EnergyGrid::new(16, 0.3, offset, false).unwrap();
        let psi = random_state(16, seed);
        let direct: f64 = grid.energies().iter().zip(psi.amplitudes()).map(|(e, a)| e * a.norm_sqr()).sum();
        prop_assert!((build_unitary_group(&grid).mean_energy(&psi) - direct).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scaling_keeps_product(mu in 0.5f64..2.0) {
        let phi = minimal_state(2e-3, 20.0).unwrap();
        let p = phi.product_functional().product;
        let q = scaling_transform(&phi, mu).unwrap().product_functional().product;
        prop_assert!((q - p).abs() / p < 1e-5);
    }
}
