use covtime_core::airy::{transported_combined_minimizer, transported_minimal_state};
use covtime_core::model::{balanced_halfline_povm, balanced_sharp_povm, gaussian_state, random_smooth_state};
use covtime_core::uncertainty::{
    check_combined_bound, check_positive_energy_bound, check_time_energy_bound, d_constant,
};

#[test]
fn full_line_random_states() {
    let f = balanced_sharp_povm(512).unwrap();
    let u = f.unitary_group();
    let mut worst = f64::INFINITY;
    for seed in 0..100 {
        let psi = random_smooth_state(f.grid(), seed);
        let r = check_time_energy_bound(&f, &u, &psi).unwrap();
        assert!(r.reliable, "seed {seed}: {:?}", r.tails);
        assert!(r.pass, "seed {seed}: {r:?}");
        worst = worst.min(r.margin);
    }
    assert!(worst >= -1e-3);
}

#[test]
fn full_line_gaussian_saturates() {
    let f = balanced_sharp_povm(512).unwrap();
    let psi = gaussian_state(f.grid(), 0.0, 0.7).unwrap().state;
    let r = check_time_energy_bound(&f, &f.unitary_group(), &psi).unwrap();
    assert!((r.lhs - 0.5).abs() <= 1e-4, "{r:?}");
}

#[test]
fn half_line_random_states() {
    let f = balanced_halfline_povm(512).unwrap();
    let u = f.unitary_group();
    for seed in 0..100 {
        let psi = random_smooth_state(f.grid(), seed);
        let r = check_positive_energy_bound(&f, &u, &psi).unwrap();
        assert!(r.reliable, "seed {seed}: {:?}", r.tails);
        assert!(r.margin >= -2e-3, "seed {seed}: {r:?}");
        let c = check_combined_bound(&f, &u, &psi).unwrap();
        assert!(c.lhs >= 2.25 - 1e-2, "seed {seed}: {c:?}");
    }
}

#[test]
fn transported_minimal_state_attains_d() {
    let f = balanced_halfline_povm(4096).unwrap();
    let psi = transported_minimal_state(f.grid(), 1e-3, 20.0).unwrap();
    let r = check_positive_energy_bound(&f, &f.unitary_group(), &psi).unwrap();
    assert!((r.lhs - 1.376).abs() <= 2e-3, "{r:?}");
    assert!((r.lhs - d_constant()).abs() <= 2e-3);
    let c = check_combined_bound(&f, &f.unitary_group(), &psi).unwrap();
    assert!(c.pass && c.lhs > 2.25, "{c:?}");
}

#[test]
fn transported_combined_minimizer_attains_nine_quarters() {
    let f = balanced_halfline_povm(4096).unwrap();
    let psi = transported_combined_minimizer(f.grid(), 1e-3, 12.0).unwrap();
    let c = check_combined_bound(&f, &f.unitary_group(), &psi).unwrap();
    assert!((c.lhs - 2.25).abs() <= 1e-2, "{c:?}");
}
