use covtime_core::dilation::{
    build_dilation, check_compression, check_imprimitivity, check_restriction, dilation_report, random_bin_sets,
    statistics_defect,
};
use covtime_core::model::{
    balanced_halfline_povm, balanced_sharp_povm, phase_profile, random_smooth_state, vector_generated_povm,
    CovariantPOVM, EnergyGrid,
};
use covtime_core::uncertainty::dilation_time_defect;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vector_generated(n: usize, seed: u64) -> CovariantPOVM {
    let grid = EnergyGrid::full_line(n, EnergyGrid::balanced_spacing(n)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    vector_generated_povm(&grid, &phase_profile(&phases)).unwrap()
}

fn check(f: &CovariantPOVM) {
    let u = f.unitary_group();
    let d = build_dilation(f, &u).unwrap();
    for bins in random_bin_sets(f.n_bins(), 100, 11) {
        assert!(check_compression(&d, f, &bins) <= 1e-10);
    }
    assert!(check_imprimitivity(&d) <= 1e-10);
    assert!(check_restriction(&d, &u) <= 1e-10);
    for seed in 0..5 {
        let psi = random_smooth_state(f.grid(), seed);
        assert!(statistics_defect(&d, f, &psi, &random_bin_sets(f.n_bins(), 20, seed)) <= 1e-9);
        assert!(dilation_time_defect(&d, f, &psi).unwrap() <= 1e-9);
    }
    let report = dilation_report(f, &u, 100, 0).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn sharp_n64() {
    check(&balanced_sharp_povm(64).unwrap());
}

#[test]
fn halfline_n64() {
    let f = balanced_halfline_povm(64).unwrap();
    assert_eq!(f.dim(), 32);
    check(&f);
}

#[test]
fn vector_generated_n64() {
    check(&vector_generated(64, 21));
}

#[test]
fn dense_round_trip_dilates_identically() {
    let f = balanced_halfline_povm(32).unwrap();
    let dense = f.to_dense();
    let a = dilation_report(&f, &f.unitary_group(), 20, 1).unwrap();
    let b = dilation_report(&dense, &dense.unitary_group(), 20, 1).unwrap();
    assert_eq!(a, b);
}
