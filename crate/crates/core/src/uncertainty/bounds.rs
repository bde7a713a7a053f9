use std::fmt;
use std::sync::OnceLock;

use super::distribution::{energy_moments_shifted, occurrence_distribution, time_uncertainty, OccurrenceDistribution};
use crate::dilation::Dilation;
use crate::model::{CovariantPOVM, StateVector, UnitaryGroup};
use crate::numerics::airy_zero;
use crate::report::Record;
use crate::{Error, Result};

/// Tail mass above which a state is too close to the periodic wrap.
pub const TAIL_LIMIT: f64 = 1e-12;
/// Fraction of bins at each end that counts as tail.
pub const TAIL_FRACTION: f64 = 0.1;

/// `d = √(4λ₁³/27)` with `−λ₁` the first zero of `Ai`.
pub fn d_constant() -> f64 {
    static D: OnceLock<f64> = OnceLock::new();
    *D.get_or_init(|| {
        let l1 = airy_zero(1).expect("first zero is tabulated");
        (4.0 * l1.powi(3) / 27.0).sqrt()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `Δ(T)·Δ(H) ≥ 1/2`.
    TimeEnergy,
    /// `Δ(T)·⟨H⟩ ≥ d` for `H ≥ 0`.
    PositiveEnergy,
    /// `Δ(T)²·⟨H²⟩ ≥ d² + 1/4`, conjectured sharp at `9/4`.
    Combined,
}

impl Bound {
    pub fn rhs(self) -> f64 {
        match self {
            Bound::TimeEnergy => 0.5,
            Bound::PositiveEnergy => d_constant(),
            Bound::Combined => d_constant().powi(2) + 0.25,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Bound::TimeEnergy => 1e-3,
            Bound::PositiveEnergy => 2e-3,
            Bound::Combined => 5e-3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bound::TimeEnergy => "time_energy",
            Bound::PositiveEnergy => "positive_energy",
            Bound::Combined => "combined",
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Probability in the outer bins of the energy and time representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMass {
    pub energy: f64,
    pub time: f64,
}

impl TailMass {
    pub fn compliant(&self) -> bool {
        self.energy < TAIL_LIMIT && self.time < TAIL_LIMIT
    }
}

fn edge_mass(p: &[f64], low: bool, high: bool) -> f64 {
    let m = ((p.len() as f64 * TAIL_FRACTION) as usize).max(1);
    let lo: f64 = if low { p[..m].iter().sum() } else { 0.0 };
    let hi: f64 = if high { p[p.len() - m..].iter().sum() } else { 0.0 };
    lo + hi
}

/// Tail mass of `ψ`. On a half-line grid the low energy end is a physical
/// boundary, not a wrap, and is not counted.
pub fn tail_mass(f: &CovariantPOVM, psi: &StateVector, mu: &OccurrenceDistribution) -> TailMass {
    TailMass {
        energy: edge_mass(&psi.probabilities(), !f.grid().is_halfline(), true),
        time: edge_mass(&mu.probabilities, true, true),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: Bound,
    pub lhs: f64,
    pub rhs: f64,
    /// The conjectured sharp value, for the combined bound.
    pub rhs_sharp: Option<f64>,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// False when the state reaches the wrap region.
    pub reliable: bool,
    pub tails: TailMass,
    pub delta_t: f64,
    pub mean_energy: f64,
    pub delta_h: f64,
    pub label: String,
    pub n_bins: usize,
    pub dim: usize,
    pub de: f64,
}

impl BoundReport {
    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn record(&self) -> Record {
        let mut r = Record::new("bound")
            .text("bound", self.bound)
            .text("state", if self.label.is_empty() { "-" } else { &self.label })
            .real("lhs", self.lhs)
            .real("rhs", self.rhs);
        if let Some(sharp) = self.rhs_sharp {
            r = r.real("rhs_sharp", sharp);
        }
        r.real("margin", self.margin)
            .real("tolerance", self.tolerance)
            .real("delta_t", self.delta_t)
            .real("mean_energy", self.mean_energy)
            .real("delta_h", self.delta_h)
            .real("tail_energy", self.tails.energy)
            .real("tail_time", self.tails.time)
            .int("n_bins", self.n_bins)
            .int("dim", self.dim)
            .real("de", self.de)
            .flag("reliable", self.reliable)
            .flag("pass", self.pass)
    }
}

/// `Δ(T_F)·Δ(H) ≥ 1/2`.
pub fn check_time_energy_bound(f: &CovariantPOVM, u: &UnitaryGroup, psi: &StateVector) -> Result<BoundReport> {
    check_bound(Bound::TimeEnergy, f, u, psi, Bound::TimeEnergy.default_tolerance())
}

/// `Δ(T_F)·⟨H⟩ ≥ d`, with `H` measured from the bottom of its spectrum.
pub fn check_positive_energy_bound(f: &CovariantPOVM, u: &UnitaryGroup, psi: &StateVector) -> Result<BoundReport> {
    check_bound(
        Bound::PositiveEnergy,
        f,
        u,
        psi,
        Bound::PositiveEnergy.default_tolerance(),
    )
}

/// `Δ(T_F)²·⟨H²⟩ ≥ d² + 1/4`; the report also carries `9/4`.
pub fn check_combined_bound(f: &CovariantPOVM, u: &UnitaryGroup, psi: &StateVector) -> Result<BoundReport> {
    check_bound(Bound::Combined, f, u, psi, Bound::Combined.default_tolerance())
}

pub fn check_bound(
    bound: Bound,
    f: &CovariantPOVM,
    u: &UnitaryGroup,
    psi: &StateVector,
    tolerance: f64,
) -> Result<BoundReport> {
    if u.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: u.dim(),
        });
    }
    let floor = u.generator().iter().copied().fold(f64::INFINITY, f64::min);
    let shift = match bound {
        Bound::TimeEnergy => 0.0,
        Bound::PositiveEnergy | Bound::Combined => {
            if floor < 0.0 {
                return Err(Error::NegativeEnergies { min_energy: floor });
            }
            floor
        }
    };
    let mu = occurrence_distribution(f, psi)?;
    let delta_t = time_uncertainty(&mu);
    let moments = energy_moments_shifted(psi, u, shift);
    let lhs = match bound {
        Bound::TimeEnergy => delta_t * moments.spread,
        Bound::PositiveEnergy => delta_t * moments.mean,
        Bound::Combined => delta_t * delta_t * moments.second,
    };
    let rhs = bound.rhs();
    let margin = lhs - rhs;
    let tails = tail_mass(f, psi, &mu);
    Ok(BoundReport {
        bound,
        lhs,
        rhs,
        rhs_sharp: (bound == Bound::Combined).then_some(2.25),
        margin,
        tolerance,
        pass: margin >= -tolerance,
        reliable: tails.compliant(),
        tails,
        delta_t,
        mean_energy: moments.mean,
        delta_h: moments.spread,
        label: String::new(),
        n_bins: f.n_bins(),
        dim: f.dim(),
        de: f.grid().de(),
    })
}

/// `|Δ(T_F) − Δ(T_E)|` where `T_E` is the sharp observable of the dilation
/// applied to the embedded state.
pub fn dilation_time_defect(d: &Dilation, f: &CovariantPOVM, psi: &StateVector) -> Result<f64> {
    let direct = time_uncertainty(&occurrence_distribution(f, psi)?);
    let sharp =
        OccurrenceDistribution::from_probabilities(d.sharp_distribution(psi.amplitudes()), f.lattice().centers())?;
    Ok((direct - time_uncertainty(&sharp)).abs())
}
