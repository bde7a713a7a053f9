//! The acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{covtime, real, Run};
use covtime_core::airy::airy_operator_spectrum;
use covtime_core::dilation::{
    build_dilation, check_compression, check_imprimitivity, check_restriction, random_bin_sets, statistics_defect,
};
use covtime_core::model::{balanced_halfline_povm, balanced_sharp_povm, random_smooth_state, CovariantPOVM};
use covtime_core::numerics::airy_zero;
use covtime_core::uncertainty::{ccr_residual, PositionGrid};
use covtime_core::Complex64;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn certify() -> Run {
    covtime(&["airy-certify", "--h", "1e-3", "--domain-l", "20"])
}

fn check_passes(run: &Run, name: &str) -> bool {
    run.check(name).get("pass") == Some("true")
}

fn c1(run: &Run) -> Verdict {
    let l1 = real(run.check("lambda1_printed"), "value");
    let z = airy_zero(1).unwrap();
    let pass =
        run.code == 0 && (l1 - 2.338).abs() <= 1e-3 && (l1 - z).abs() <= 1e-6 && run.elapsed.as_secs_f64() <= 10.0;
    verdict(
        pass,
        format!(
            "lambda1={l1:.9} |err zero|={:.2e} runtime={:.2}s",
            (l1 - z).abs(),
            run.elapsed.as_secs_f64()
        ),
    )
}

fn c2(run: &Run) -> Verdict {
    let d = real(run.check("d_printed"), "value");
    verdict((d - 1.376).abs() <= 1e-3, format!("d={d:.7}"))
}

fn c3(run: &Run) -> Verdict {
    let product = real(run.check("minimal_product"), "value");
    let virial = real(run.check("minimal_virial"), "value");
    let overlap = real(run.check("minimal_overlap"), "value");
    let pass = (product - 1.8935).abs() <= 5e-4 && virial.abs() <= 1e-5 && overlap >= 1.0 - 1e-6;
    verdict(
        pass,
        format!("product={product:.7} virial={virial:.2e} overlap={overlap:.12}"),
    )
}

fn c4(run: &Run) -> Verdict {
    let descent = run.find("descent", "functional", "product").unwrap();
    let value = real(descent, "value");
    let spectral = 4.0 / 27.0 * airy_zero(1).unwrap().powi(3);
    let pass = (value - spectral).abs() <= 2e-4
        && (value - 1.8935).abs() <= 2e-4
        && check_passes(run, "descent_product_relative");
    verdict(
        pass,
        format!(
            "descent={value:.7} iterations={} |vs spectral|={:.2e}",
            descent.get("iterations").unwrap_or("?"),
            (value - spectral).abs()
        ),
    )
}

fn c5(run: &Run) -> Verdict {
    let combined = real(run.check("combined_spectral"), "value");
    let overlap = real(run.check("combined_overlap"), "value");
    let weaker = real(run.check("weaker_bound_printed"), "value");
    let pass = (combined - 2.25).abs() <= 1e-2
        && overlap >= 0.999
        && (weaker - 2.1434).abs() <= 3e-3
        && weaker < 2.25
        && 2.1434 < 2.25
        && check_passes(run, "descent_combined_relative");
    verdict(
        pass,
        format!("inf={combined:.7} overlap={overlap:.9} d^2+1/4={weaker:.7}"),
    )
}

fn c6() -> Verdict {
    let fuzz = covtime(&[
        "bounds",
        "--model",
        "fullline",
        "--states",
        "random:0..99",
        "--bound",
        "time-energy",
    ]);
    let gauss = covtime(&[
        "bounds",
        "--model",
        "fullline",
        "--states",
        "gaussian",
        "--bound",
        "time-energy",
    ]);
    let bounds: Vec<_> = fuzz.of_kind("bound").collect();
    let worst = bounds.iter().map(|r| real(r, "lhs")).fold(f64::INFINITY, f64::min);
    let compliant = bounds.iter().all(|r| r.get("reliable") == Some("true"));
    let g = real(gauss.of_kind("bound").next().unwrap(), "lhs");
    let runtime = fuzz.elapsed.as_secs_f64() + gauss.elapsed.as_secs_f64();
    let pass = fuzz.code == 0
        && bounds.len() == 100
        && compliant
        && worst >= 0.5 - 1e-3
        && (g - 0.5).abs() <= 1e-4
        && runtime <= 30.0;
    verdict(
        pass,
        format!("min lhs={worst:.6} gaussian={g:.8} runtime={runtime:.2}s"),
    )
}

fn c7() -> Verdict {
    let fuzz = covtime(&[
        "bounds",
        "--model",
        "halfline",
        "--states",
        "random:1..100",
        "--bound",
        "positive-energy",
    ]);
    let minimal = covtime(&[
        "bounds",
        "--model",
        "halfline",
        "--states",
        "minimal",
        "--bound",
        "positive-energy",
    ]);
    let bounds: Vec<_> = fuzz.of_kind("bound").collect();
    let worst = bounds.iter().map(|r| real(r, "lhs")).fold(f64::INFINITY, f64::min);
    let compliant = bounds.iter().all(|r| r.get("reliable") == Some("true"));
    let m = real(minimal.of_kind("bound").next().unwrap(), "lhs");
    let pass = fuzz.code == 0 && bounds.len() == 100 && compliant && worst >= 1.376 - 2e-3 && (m - 1.376).abs() <= 2e-3;
    verdict(pass, format!("min lhs={worst:.6} minimal state={m:.6}"))
}

fn dilation_residuals(f: &CovariantPOVM, seed: u64) -> (f64, f64, f64, f64) {
    let u = f.unitary_group();
    let d = build_dilation(f, &u).expect("dilation builds");
    let sets = random_bin_sets(f.n_bins(), 100, seed);
    let compression = sets.iter().map(|b| check_compression(&d, f, b)).fold(0.0, f64::max);
    let psi = random_smooth_state(f.grid(), seed);
    (
        compression,
        check_imprimitivity(&d),
        check_restriction(&d, &u),
        statistics_defect(&d, f, &psi, &sets),
    )
}

fn c8() -> Verdict {
    let vector = {
        use covtime_core::model::{phase_profile, vector_generated_povm, EnergyGrid};
        let grid = EnergyGrid::full_line(64, EnergyGrid::balanced_spacing(64)).unwrap();
        let phases: Vec<f64> = (0..64).map(|j| (j * j) as f64 * 0.37).collect();
        vector_generated_povm(&grid, &phase_profile(&phases)).unwrap()
    };
    let povms = [
        ("sharp", balanced_sharp_povm(64).unwrap()),
        ("halfline", balanced_halfline_povm(64).unwrap()),
        ("vector", vector),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, (name, f)) in povms.iter().enumerate() {
        let (c, imp, res, stats) = dilation_residuals(f, i as u64);
        pass &= f.dim() <= 64 && c <= 1e-10 && imp <= 1e-10 && res <= 1e-10 && stats <= 1e-9;
        detail.push(format!("{name}: max={:.1e}", c.max(imp).max(res).max(stats)));
    }
    verdict(pass, detail.join(" "))
}

fn c9(run: &Run) -> Verdict {
    let chain = run.of_kind("identity_chain").next().unwrap();
    let pass = chain.get("pairs") == Some("10000")
        && chain.get("failures") == Some("0")
        && real(chain, "worst_floor_gap") >= -1e-12;
    verdict(
        pass,
        format!(
            "pairs={} failures={} worst gap={:.2e}",
            chain.get("pairs").unwrap(),
            chain.get("failures").unwrap(),
            real(chain, "worst_floor_gap")
        ),
    )
}

fn c10() -> Verdict {
    let pair = |x: f64| {
        (
            Complex64::new((-0.5 * (x - 0.4) * (x - 0.4)).exp(), 0.0) * Complex64::from_polar(1.0, 0.7 * x),
            Complex64::new((-0.8 * (x + 0.3) * (x + 0.3)).exp(), 0.0),
        )
    };
    let residual = |h: f64| {
        let grid = PositionGrid::centred((16.0 / h) as usize + 1, h).unwrap();
        let phi = grid.sample(|x| pair(x).0).unwrap();
        let psi = grid.sample(|x| pair(x).1).unwrap();
        ccr_residual(&phi, &psi, &grid).unwrap().norm()
    };
    let mut ratios = Vec::new();
    for h in [0.2, 0.1, 0.05] {
        ratios.push(residual(h) / residual(h / 2.0));
    }
    let pass = ratios.iter().all(|r| (r - 4.0).abs() <= 0.5);
    verdict(pass, format!("ratios={ratios:.3?}"))
}

fn c11() -> Verdict {
    let fine = airy_operator_spectrum(1e-3, 20.0, 1.0, 3).unwrap();
    let coarse = airy_operator_spectrum(2e-3, 20.0, 1.0, 3).unwrap();
    let ratios: Vec<f64> = (0..3)
        .map(|i| {
            let z = airy_zero(i + 1).unwrap();
            (coarse[i] - z) / (fine[i] - z)
        })
        .collect();
    verdict(
        ratios.iter().all(|r| (r - 4.0).abs() <= 0.5),
        format!("ratios={ratios:.4?}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let run = certify();
    let criteria: Vec<(&str, Verdict)> = vec![
        ("airy ground eigenvalue", c1(&run)),
        ("universal constant d", c2(&run)),
        ("minimal state", c3(&run)),
        ("independent optimization", c4(&run)),
        ("combined bound", c5(&run)),
        ("time-energy fuzz", c6()),
        ("positive-energy fuzz", c7()),
        ("dilation correctness", c8()),
        ("inf identity", c9(&run)),
        ("ccr convergence", c10()),
        ("convergence order", c11()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in criteria.iter().enumerate() {
        failed += usize::from(!v.pass);
        println!(
            "acceptance {:>2} {:<26} {}  {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
