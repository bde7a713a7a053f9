use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use covtime_core::airy::{
    airy_operator_spectrum, dirichlet_oscillator_ground, minimal_state, minimize, spectrum_tsv,
    verify_min_identity_chain, Functional, GridState, Method, Potential,
};
use covtime_core::numerics::{airy_ai, airy_zero};
use covtime_core::report::Record;
use covtime_core::uncertainty::d_constant;

use crate::config::{CertifyArgs, Common};
use crate::output::{write_atomic, CliError, Outcome};

pub const DEFAULT_H: f64 = 1e-3;
pub const DEFAULT_LENGTH: f64 = 20.0;
/// Descent runs on this grid or a finer one.
pub const DESCENT_H: f64 = 1e-3;
pub const LEVELS: usize = 3;
pub const IDENTITY_PAIRS: usize = 10_000;

const PRINTED_LAMBDA: f64 = 2.338;
const PRINTED_D: f64 = 1.376;
const PRINTED_PRODUCT: f64 = 1.8935;
const PRINTED_COMBINED: f64 = 2.25;
const PRINTED_WEAKER: f64 = 2.1434;

/// Absolute tolerance `scale·(base + c·h²)`; the `h²` term absorbs the
/// discretization error of the three-point Laplacian.
struct Tolerance {
    scale: f64,
    h: f64,
}

impl Tolerance {
    fn at(&self, base: f64, c: f64) -> f64 {
        self.scale * (base + c * self.h * self.h)
    }
}

fn near(name: &str, value: f64, reference: f64, tolerance: f64) -> Record {
    let error = value - reference;
    Record::new("check")
        .text("name", name)
        .real("value", value)
        .real("reference", reference)
        .real("error", error)
        .real("tolerance", tolerance)
        .flag("pass", error.abs() <= tolerance)
}

fn below(name: &str, value: f64, limit: f64) -> Record {
    Record::new("check")
        .text("name", name)
        .real("value", value)
        .real("limit", limit)
        .flag("pass", value < limit)
}

pub fn run(common: &Common, args: &CertifyArgs) -> Result<Outcome, CliError> {
    let h = common.h.unwrap_or(DEFAULT_H);
    let length = common.domain_l.unwrap_or(DEFAULT_LENGTH);
    let required = Potential::Linear(1.0).required_length(1)?;
    if length < required {
        return Err(CliError::Usage(format!(
            "domain length {length} is too short; the Airy ground state needs L ≥ {required:.2}"
        )));
    }
    let tol = Tolerance {
        scale: common.tolerance_scale,
        h,
    };
    let mut out = Outcome::new();
    out.push(
        Record::new("config")
            .text("command", "airy-certify")
            .real("h", h)
            .real("L", length)
            .text("seed", common.seed)
            .real("tolerance_scale", common.tolerance_scale),
    );

    // levels that fit the domain
    let mut levels = 1;
    while levels < LEVELS && Potential::Linear(1.0).required_length(levels + 1)? <= length {
        levels += 1;
    }
    let spectrum = airy_operator_spectrum(h, length, 1.0, levels)?;
    for (i, &e) in spectrum.iter().enumerate() {
        let z = airy_zero(i + 1)?;
        out.push(near(
            &format!("lambda{}_airy_zero", i + 1),
            e,
            z,
            tol.at(1e-6, z * z / 30.0),
        ));
    }
    let lambda1 = spectrum[0];
    out.push(near("lambda1_printed", lambda1, PRINTED_LAMBDA, tol.at(1e-3, 0.2)));
    let d = (4.0 * lambda1.powi(3) / 27.0).sqrt();
    out.push(near("d_printed", d, PRINTED_D, tol.at(1e-3, 0.2)));

    let coarse = 2.0 * h;
    if length / coarse >= 4.0 {
        let doubled = airy_operator_spectrum(coarse, length, 1.0, levels)?;
        for (i, (&fine, &rough)) in spectrum.iter().zip(&doubled).enumerate() {
            let z = airy_zero(i + 1)?;
            let ratio = (rough - z) / (fine - z);
            out.push(near(
                &format!("order_ratio{}", i + 1),
                ratio,
                4.0,
                0.5 * common.tolerance_scale,
            ));
        }
    }

    let phi = minimal_state(h, length)?;
    let p = phi.product_functional();
    out.push(near("minimal_product", p.product, PRINTED_PRODUCT, tol.at(5e-4, 0.5)));
    out.push(near(
        "minimal_virial",
        2.0 * p.kinetic - p.position,
        0.0,
        tol.at(1e-5, 0.4),
    ));
    let z1 = airy_zero(1)?;
    let ai = GridState::from_fn(|x| airy_ai(x - z1), h, length)?;
    out.push(near(
        "minimal_overlap",
        phi.overlap(&ai),
        1.0,
        common.tolerance_scale * 1e-6,
    ));

    let hd = h.min(DESCENT_H);
    let spectral = minimize(Functional::Product, hd, length, Method::Spectral, common.seed)?;
    let descent = minimize(Functional::Product, hd, length, Method::Descent, common.seed)?;
    out.push(descent_record("product", hd, &descent));
    out.push(near(
        "descent_product_relative",
        descent.value / spectral.value - 1.0,
        0.0,
        common.tolerance_scale * 1e-6,
    ));
    out.push(near(
        "descent_product_printed",
        descent.value,
        PRINTED_PRODUCT,
        common.tolerance_scale * 2e-4,
    ));

    let combined = minimize(Functional::Combined, h, length, Method::Spectral, common.seed)?;
    out.push(near(
        "combined_spectral",
        combined.value,
        PRINTED_COMBINED,
        tol.at(1e-2, 1.0),
    ));
    let oscillator = GridState::from_fn(|x| x * (-x * x / 2.0).exp(), h, length)?;
    out.push(near(
        "combined_overlap",
        combined.state.overlap(&oscillator),
        1.0,
        common.tolerance_scale * 1e-3,
    ));
    out.push(near(
        "oscillator_ground",
        dirichlet_oscillator_ground(h, length)?,
        3.0,
        tol.at(1e-3, 0.7),
    ));
    let combined_spectral_fine = minimize(Functional::Combined, hd, length, Method::Spectral, common.seed)?;
    let combined_descent = minimize(Functional::Combined, hd, length, Method::Descent, common.seed)?;
    out.push(descent_record("combined", hd, &combined_descent));
    out.push(near(
        "descent_combined_relative",
        combined_descent.value / combined_spectral_fine.value - 1.0,
        0.0,
        common.tolerance_scale * 1e-6,
    ));
    let weaker = d * d + 0.25;
    out.push(near(
        "weaker_bound_printed",
        weaker,
        PRINTED_WEAKER,
        common.tolerance_scale * 3e-3,
    ));
    out.push(below("weaker_than_combined", weaker, PRINTED_COMBINED));

    let (a, b) = identity_pairs(common.seed, IDENTITY_PAIRS);
    out.push(verify_min_identity_chain(&a, &b)?.record());

    let failed = out.records.iter().filter(|r| r.get("pass") == Some("false")).count();
    out.push(
        Record::new("summary")
            .text("command", "airy-certify")
            .real("lambda1", lambda1)
            .real("d", d)
            .real("d_exact", d_constant())
            .real("inf_product", p.product)
            .real("inf_combined", combined.value)
            .real("weaker_bound", weaker)
            .int("checks", out.records.len() - 1)
            .int("failed", failed)
            .flag("pass", failed == 0),
    );

    if let Some(dir) = &args.tables {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        write_atomic(&dir.join("spectrum.tsv"), spectrum_tsv(&spectrum)?.as_bytes())?;
        write_atomic(&dir.join("minimal_state.tsv"), phi.to_tsv().as_bytes())?;
    }
    Ok(out)
}

fn descent_record(functional: &str, h: f64, m: &covtime_core::airy::Minimum) -> Record {
    Record::new("descent")
        .text("functional", functional)
        .real("h", h)
        .real("value", m.value)
        .int("iterations", m.iterations)
        .flag("converged", m.converged)
}

/// Seeded pairs `(a, b)` with both entries in `[1e-3, 10]`.
pub fn identity_pairs(seed: u64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(1e-3..=10.0), rng.random_range(1e-3..=10.0)))
        .unzip()
}
