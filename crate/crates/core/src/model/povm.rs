//! Covariant POVMs on a finite time lattice.
//!
//! Bin `k` of the lattice stands for the interval of width `τ` around `t_k`;
//! a Borel set is a union of bins and `F(B)` is the sum of its effects.
//! Covariance is the lattice form of `U(t)F(B)U(−t) = F(B + t)`:
//! conjugating bin `k` by `U(τ)` gives bin `k + 1`, with periodic wrap.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{EnergyGrid, StateVector, TimeLattice, UnitaryGroup};
use crate::numerics::{hermitian_eigvals, inner, ComplexMatrix};
use crate::report::Record;
use crate::{par, Error, Result};

/// Default tolerance of [`validate_povm`].
pub const POVM_TOLERANCE: f64 = 1e-10;
const UNIMODULAR_TOLERANCE: f64 = 1e-10;

/// How the effects are stored.
#[derive(Debug, Clone, PartialEq)]
pub enum EffectSet {
    /// One explicit matrix per bin.
    Dense(Vec<ComplexMatrix>),
    /// Rank-one effects `F_k = |v_k⟩⟨v_k|` with `v_k = U(t_k)·profile`: the
    /// orbit of a single vector under the time evolution.
    Orbit { profile: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovariantPOVM {
    grid: EnergyGrid,
    lattice: TimeLattice,
    effects: EffectSet,
}

impl CovariantPOVM {
    /// POVM from explicit effect matrices. Shapes are checked here; the POVM
    /// axioms are checked by [`validate_povm`].
    pub fn from_dense(grid: EnergyGrid, lattice: TimeLattice, effects: Vec<ComplexMatrix>) -> Result<Self> {
        if effects.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                found: effects.len(),
            });
        }
        if let Some(bad) = effects
            .iter()
            .find(|m| m.rows() != grid.len() || m.cols() != grid.len())
        {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: if bad.rows() != grid.len() {
                    bad.rows()
                } else {
                    bad.cols()
                },
            });
        }
        // raise the Hermitian flag where it is legitimate; validation reports the rest
        let effects = effects
            .into_iter()
            .map(|m| m.clone().into_hermitian().unwrap_or(m))
            .collect();
        Ok(CovariantPOVM {
            grid,
            lattice,
            effects: EffectSet::Dense(effects),
        })
    }

    fn orbit(grid: EnergyGrid, lattice: TimeLattice, profile: Vec<Complex64>) -> Self {
        debug_assert_eq!(profile.len(), grid.len());
        CovariantPOVM {
            grid,
            lattice,
            effects: EffectSet::Orbit { profile },
        }
    }

    pub fn grid(&self) -> &EnergyGrid {
        &self.grid
    }

    pub fn lattice(&self) -> &TimeLattice {
        &self.lattice
    }

    pub fn effects(&self) -> &EffectSet {
        &self.effects
    }

    pub fn n_bins(&self) -> usize {
        self.lattice.len()
    }

    /// Dimension of the Hilbert space the effects act on.
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn unitary_group(&self) -> UnitaryGroup {
        UnitaryGroup::new(&self.grid)
    }

    /// `v_k` for orbit-type POVMs.
    pub fn orbit_vector(&self, k: usize) -> Option<Vec<Complex64>> {
        match &self.effects {
            EffectSet::Orbit { profile } => {
                let t = self.lattice.center(k);
                Some(
                    profile
                        .iter()
                        .enumerate()
                        .map(|(j, &g)| Complex64::from_polar(1.0, self.grid.energy(j) * t) * g)
                        .collect(),
                )
            }
            EffectSet::Dense(_) => None,
        }
    }

    /// The effect of bin `k` as a matrix.
    pub fn effect(&self, k: usize) -> ComplexMatrix {
        match &self.effects {
            EffectSet::Dense(effects) => effects[k].clone(),
            EffectSet::Orbit { .. } => {
                let v = self.orbit_vector(k).expect("orbit");
                ComplexMatrix::outer(&v, &v)
                    .into_hermitian()
                    .expect("rank-one projector is Hermitian")
            }
        }
    }

    /// `(ψ, F_k ψ)`.
    pub fn expectation(&self, k: usize, psi: &[Complex64]) -> f64 {
        match &self.effects {
            EffectSet::Dense(effects) => effects[k].expectation(psi),
            EffectSet::Orbit { .. } => inner(&self.orbit_vector(k).expect("orbit"), psi).norm_sqr(),
        }
    }

    /// `F(B)` for a set of bins.
    pub fn measure(&self, bins: &[usize]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for &k in bins {
            acc.accumulate(&self.effect(k));
        }
        acc
    }

    /// Same POVM with every effect stored explicitly.
    pub fn to_dense(&self) -> CovariantPOVM {
        let effects = par::map_range(self.n_bins(), |k| self.effect(k));
        CovariantPOVM {
            grid: self.grid,
            lattice: self.lattice,
            effects: EffectSet::Dense(effects),
        }
    }

    /// Copy with the effect of bin `k` multiplied by `factor`. Useful for
    /// building deliberately broken inputs.
    pub fn with_scaled_effect(&self, k: usize, factor: f64) -> CovariantPOVM {
        let mut dense = self.to_dense();
        if let EffectSet::Dense(effects) = &mut dense.effects {
            effects[k] = effects[k].scaled(Complex64::new(factor, 0.0));
        }
        dense
    }

    /// Copy with every effect multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> CovariantPOVM {
        let mut dense = self.to_dense();
        if let EffectSet::Dense(effects) = &mut dense.effects {
            for e in effects.iter_mut() {
                *e = e.scaled(Complex64::new(factor, 0.0));
            }
        }
        dense
    }
}

/// The sharp time observable: `F_k = M†·χ_k·M` with `M` the unitary discrete
/// Fourier map `M_kj = exp(−i·E_j·t_k)/√n` from energies to time bins.
pub fn build_sharp_time_povm(grid: &EnergyGrid) -> Result<CovariantPOVM> {
    if grid.is_halfline() {
        return Err(Error::invalid(
            "energy grid",
            "the sharp time observable needs a full-line grid; use build_halfline_povm",
        ));
    }
    let n = grid.len();
    let profile = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    Ok(CovariantPOVM::orbit(*grid, grid.dual_lattice(), profile))
}

/// Compresses the sharp observable of `grid_full` to the energies at and
/// above `grid_full.energy(cutoff_index)`. The result acts on that half-line
/// subspace and is covariant but no longer projection valued.
pub fn build_halfline_povm(grid_full: &EnergyGrid, cutoff_index: usize) -> Result<CovariantPOVM> {
    let n = grid_full.len();
    if cutoff_index == 0 || cutoff_index >= n {
        return Err(Error::invalid(
            "cutoff",
            format!("cutoff index {cutoff_index} must lie strictly between 0 and {n}"),
        ));
    }
    let retained = n - cutoff_index;
    if retained < 2 {
        return Err(Error::CutoffTooLarge { retained });
    }
    let floor = grid_full.energy(cutoff_index);
    if floor < 0.0 {
        return Err(Error::invalid(
            "cutoff",
            format!("cutoff energy {floor} is negative; the retained subspace must have H ≥ 0"),
        ));
    }
    let grid = EnergyGrid::new(retained, grid_full.de(), floor, true)?;
    let profile = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); retained];
    Ok(CovariantPOVM::orbit(grid, grid_full.dual_lattice(), profile))
}

/// Sharp observable on the balanced full-line grid of `n` points.
pub fn balanced_sharp_povm(n: usize) -> Result<CovariantPOVM> {
    build_sharp_time_povm(&EnergyGrid::full_line(n, EnergyGrid::balanced_spacing(n))?)
}

/// Half-line compression of the balanced full-line grid of `n` points at
/// `E = 0`, retaining `n − ⌊n/2⌋` energies.
pub fn balanced_halfline_povm(n: usize) -> Result<CovariantPOVM> {
    build_halfline_povm(&EnergyGrid::full_line(n, EnergyGrid::balanced_spacing(n))?, n / 2)
}

/// The covariant family generated by `g`: `F_k = U(t_k)|g⟩⟨g|U(−t_k)`.
///
/// Completeness on the lattice requires a flat energy profile,
/// `|√n·g_j| = 1` for every `j`.
pub fn vector_generated_povm(grid: &EnergyGrid, g: &StateVector) -> Result<CovariantPOVM> {
    let n = grid.len();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.len(),
        });
    }
    let root_n = (n as f64).sqrt();
    for (index, a) in g.amplitudes().iter().enumerate() {
        let modulus = a.norm() * root_n;
        if (modulus - 1.0).abs() > UNIMODULAR_TOLERANCE {
            return Err(Error::NotUnimodular { index, modulus });
        }
    }
    Ok(CovariantPOVM::orbit(
        *grid,
        grid.dual_lattice(),
        g.amplitudes().to_vec(),
    ))
}

/// Unit vector with the given phases and flat modulus `1/√n`.
pub fn phase_profile(phases: &[f64]) -> StateVector {
    let scale = 1.0 / (phases.len() as f64).sqrt();
    StateVector::new(phases.iter().map(|&p| Complex64::from_polar(scale, p)).collect())
        .expect("flat profile is normalized")
}

/// A POVM axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Positivity,
    Completeness,
    Covariance,
    Additivity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Positivity => "positivity",
            Axiom::Completeness => "completeness",
            Axiom::Covariance => "covariance",
            Axiom::Additivity => "additivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Smallest eigenvalue of each effect; `−∞` marks a non-Hermitian effect.
    pub min_eigenvalues: Vec<f64>,
    /// `‖Σ_k F_k − 1‖_max`.
    pub completeness_residual: f64,
    /// `max_k ‖U(τ)F_kU(−τ) − F_{k+1}‖_max`.
    pub covariance_residual: f64,
    /// Worst `‖Σ_parts F(part) − F(all)‖_max` over random bin partitions.
    pub additivity_residual: f64,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn violations(&self) -> Vec<Axiom> {
        let mut out = Vec::new();
        if !(self.min_eigenvalue() >= -self.tolerance) {
            out.push(Axiom::Positivity);
        }
        if !(self.completeness_residual <= self.tolerance) {
            out.push(Axiom::Completeness);
        }
        if !(self.covariance_residual <= self.tolerance) {
            out.push(Axiom::Covariance);
        }
        if !(self.additivity_residual <= self.tolerance) {
            out.push(Axiom::Additivity);
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn record(&self) -> Record {
        let violated = self.violations();
        Record::new("povm_validation")
            .int("bins", self.min_eigenvalues.len())
            .real("min_eigenvalue", self.min_eigenvalue())
            .real("completeness_residual", self.completeness_residual)
            .real("covariance_residual", self.covariance_residual)
            .real("additivity_residual", self.additivity_residual)
            .real("tolerance", self.tolerance)
            .flag("pass", violated.is_empty())
            .text(
                "violated",
                if violated.is_empty() {
                    "none".to_owned()
                } else {
                    violated.iter().map(Axiom::to_string).collect::<Vec<_>>().join(",")
                },
            )
    }
}

/// Checks positivity, completeness, lattice covariance and finite additivity.
pub fn validate_povm(f: &CovariantPOVM) -> ValidationReport {
    validate_povm_with(f, POVM_TOLERANCE, 0)
}

pub fn validate_povm_with(f: &CovariantPOVM, tolerance: f64, seed: u64) -> ValidationReport {
    let n = f.n_bins();
    let dim = f.dim();
    let min_eigenvalues = match f.effects() {
        EffectSet::Dense(effects) => par::map_slice(effects, |e| {
            if e.is_hermitian() {
                hermitian_eigvals(e).map(|v| v[0]).unwrap_or(f64::NEG_INFINITY)
            } else {
                f64::NEG_INFINITY
            }
        }),
        // |v⟩⟨v| has eigenvalues ‖v‖² and 0 (dim − 1 times)
        EffectSet::Orbit { profile } => {
            let weight: f64 = profile.iter().map(|z| z.norm_sqr()).sum();
            vec![if dim == 1 { weight } else { 0.0 }; n]
        }
    };

    let effects: Vec<ComplexMatrix> = par::map_range(n, |k| f.effect(k));
    let total = sum_matrices(&effects, 0..n, dim);
    let completeness_residual = total.distance_from_identity();

    let u = f.unitary_group();
    let tau = f.lattice().tau();
    let covariance_residual = par::max_range(n, |k| u.conjugate(tau, &effects[k]).distance(&effects[(k + 1) % n]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut additivity_residual: f64 = 0.0;
    for _ in 0..3 {
        let parts = rng.random_range(2..=4usize);
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..parts)).collect();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for part in 0..parts {
            let bins = (0..n).filter(|&k| labels[k] == part);
            acc.accumulate(&sum_matrices(&effects, bins, dim));
        }
        additivity_residual = additivity_residual.max(acc.distance(&total));
    }

    ValidationReport {
        min_eigenvalues,
        completeness_residual,
        covariance_residual,
        additivity_residual,
        tolerance,
    }
}

fn sum_matrices(effects: &[ComplexMatrix], bins: impl Iterator<Item = usize>, dim: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for k in bins {
        acc.accumulate(&effects[k]);
    }
    acc
}
