//! POVM documents in JSON.
//!
//! ```json
//! {"n_bins": 2, "dim": 2, "tau": 3.14, "energies": [-1.0, 0.0],
//!  "effects": [{"re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}, ...]}
//! ```
//!
//! Reals are written with 17 significant digits so that a write/read round
//! trip is exact.

use std::f64::consts::PI;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use super::grid::{EnergyGrid, TimeLattice};
use super::povm::CovariantPOVM;
use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

const SPACING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectDocument {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmDocument {
    pub n_bins: usize,
    pub dim: usize,
    pub tau: f64,
    pub energies: Vec<f64>,
    pub effects: Vec<EffectDocument>,
}

impl PovmDocument {
    pub fn from_povm(f: &CovariantPOVM) -> Self {
        let dim = f.dim();
        let effects = (0..f.n_bins())
            .map(|k| {
                let e = f.effect(k);
                EffectDocument {
                    re: (0..dim).map(|i| e.row(i).iter().map(|z| z.re).collect()).collect(),
                    im: (0..dim).map(|i| e.row(i).iter().map(|z| z.im).collect()).collect(),
                }
            })
            .collect();
        PovmDocument {
            n_bins: f.n_bins(),
            dim,
            tau: f.lattice().tau(),
            energies: f.grid().energies(),
            effects,
        }
    }

    /// Checks shapes and the grid/lattice duality, then builds the POVM.
    pub fn into_povm(self) -> Result<CovariantPOVM> {
        let fail = |msg: String| Err(Error::Format(msg));
        if self.energies.len() != self.dim {
            return fail(format!("{} energies for dimension {}", self.energies.len(), self.dim));
        }
        if self.effects.len() != self.n_bins {
            return fail(format!("{} effects for {} bins", self.effects.len(), self.n_bins));
        }
        if self.dim < 2 {
            return fail(format!("dimension {} is below 2", self.dim));
        }
        let de = (self.energies[self.dim - 1] - self.energies[0]) / (self.dim - 1) as f64;
        let offset = self.energies[0];
        for (j, &e) in self.energies.iter().enumerate() {
            let expected = offset + j as f64 * de;
            if !((e - expected).abs() <= SPACING_TOLERANCE * de.abs().max(1.0)) {
                return fail(format!("energy {j} is {e}, expected {expected} on a uniform grid"));
            }
        }
        if !(de > 0.0) {
            return fail(format!("energy spacing {de} is not positive"));
        }
        let duality = self.n_bins as f64 * self.tau * de / (2.0 * PI);
        if !((duality - 1.0).abs() <= SPACING_TOLERANCE) {
            return fail(format!(
                "n_bins·tau·dE = {:.12}·2π; the lattice must be dual to the grid",
                duality
            ));
        }
        let grid = EnergyGrid::new(self.dim, de, offset, offset >= 0.0)?;
        let lattice = TimeLattice::new(self.n_bins, self.tau)?;
        let mut effects = Vec::with_capacity(self.n_bins);
        for (k, e) in self.effects.into_iter().enumerate() {
            let square = |m: &Vec<Vec<f64>>| m.len() == self.dim && m.iter().all(|r| r.len() == self.dim);
            if !square(&e.re) || !square(&e.im) {
                return fail(format!("effect {k} is not {0}×{0}", self.dim));
            }
            let re: Vec<f64> = e.re.into_iter().flatten().collect();
            let im: Vec<f64> = e.im.into_iter().flatten().collect();
            effects.push(ComplexMatrix::from_parts(self.dim, self.dim, &re, &im)?);
        }
        CovariantPOVM::from_dense(grid, lattice, effects)
    }
}

/// Writes `f` as a JSON document.
pub fn write_povm<W: Write>(f: &CovariantPOVM, writer: W) -> Result<()> {
    let doc = PovmDocument::from_povm(f);
    let finite = doc.tau.is_finite()
        && doc.energies.iter().all(|e| e.is_finite())
        && doc
            .effects
            .iter()
            .all(|e| e.re.iter().chain(&e.im).flatten().all(|x| x.is_finite()));
    if !finite {
        return Err(Error::Format("POVM contains non-finite numbers".into()));
    }
    let mut ser = serde_json::Serializer::with_formatter(writer, Precise);
    doc.serialize(&mut ser).map_err(|e| Error::Format(e.to_string()))
}

/// Reads and checks a JSON POVM document.
pub fn read_povm<R: Read>(reader: R) -> Result<CovariantPOVM> {
    let doc: PovmDocument = serde_json::from_reader(reader).map_err(|e| Error::Format(e.to_string()))?;
    doc.into_povm()
}

struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}
