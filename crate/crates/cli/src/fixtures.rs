use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use covtime_core::airy::minimal_state;
use covtime_core::model::{
    balanced_halfline_povm, balanced_sharp_povm, phase_profile, read_povm, validate_povm, vector_generated_povm,
    write_povm, CovariantPOVM, EnergyGrid,
};
use covtime_core::report::Record;

use crate::certify::DEFAULT_LENGTH;
use crate::config::Common;
use crate::output::{write_atomic, CliError, Outcome};

pub const SHARP_N: usize = 16;
pub const HALFLINE_N: usize = 32;
pub const VECTOR_N: usize = 16;
/// Spacing of the minimal-state table.
pub const TABLE_H: f64 = 1e-2;

pub const FILES: [&str; 4] = [
    "sharp_n16.json",
    "halfline_n32.json",
    "vector_n16.json",
    "minimal_state.tsv",
];

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;

    let sharp = balanced_sharp_povm(SHARP_N)?;
    let halfline = balanced_halfline_povm(HALFLINE_N)?;
    let vector = seeded_vector_povm(common.seed)?;

    let mut out = Outcome::new();
    for (name, f) in FILES.iter().zip([&sharp, &halfline, &vector]) {
        out.push(emit_povm(&dir.join(name), f)?);
    }
    let h = common.h.unwrap_or(TABLE_H);
    let length = common.domain_l.unwrap_or(DEFAULT_LENGTH);
    let table = dir.join(FILES[3]);
    let phi = minimal_state(h, length)?;
    write_atomic(&table, phi.to_tsv().as_bytes())?;
    out.push(
        Record::new("fixture")
            .text("path", table.display())
            .int("rows", phi.values().len())
            .real("h", h)
            .real("L", length),
    );
    Ok(out)
}

/// Vector-generated POVM on the balanced grid with seeded unimodular phases.
pub fn seeded_vector_povm(seed: u64) -> Result<CovariantPOVM, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..VECTOR_N).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let grid = EnergyGrid::full_line(VECTOR_N, EnergyGrid::balanced_spacing(VECTOR_N))?;
    Ok(vector_generated_povm(&grid, &phase_profile(&phases))?)
}

/// Writes `f`, reads it back and validates the copy.
fn emit_povm(path: &Path, f: &CovariantPOVM) -> Result<Record, CliError> {
    let mut bytes = Vec::new();
    write_povm(f, &mut bytes)?;
    write_atomic(path, &bytes)?;
    let back = read_povm(bytes.as_slice())?;
    let v = validate_povm(&back);
    Ok(Record::new("fixture")
        .text("path", path.display())
        .int("n_bins", back.n_bins())
        .int("dim", back.dim())
        .real("completeness_residual", v.completeness_residual)
        .flag("pass", v.passed()))
}
