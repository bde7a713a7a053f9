use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::ensure_positive;
use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

/// Tolerance on `‖ψ‖ = 1`.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Evenly spaced energies `offset + j·dE`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    n: usize,
    de: f64,
    offset: f64,
    halfline: bool,
}

impl EnergyGrid {
    pub fn new(n: usize, de: f64, offset: f64, halfline: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "energy grid",
                format!("need at least 2 points, got {n}"),
            ));
        }
        ensure_positive("dE", de)?;
        if !offset.is_finite() {
            return Err(Error::invalid("energy grid", "offset is not finite"));
        }
        if halfline && offset < 0.0 {
            return Err(Error::invalid(
                "energy grid",
                format!("half-line grid starts at negative energy {offset}"),
            ));
        }
        Ok(EnergyGrid {
            n,
            de,
            offset,
            halfline,
        })
    }

    /// Grid symmetric about zero: `offset = −⌊n/2⌋·dE`.
    pub fn full_line(n: usize, de: f64) -> Result<Self> {
        Self::new(n, de, -((n / 2) as f64) * de, false)
    }

    /// Grid on `[0, (n−1)·dE]`; the point `E = 0` is the Dirichlet boundary.
    pub fn half_line(n: usize, de: f64) -> Result<Self> {
        Self::new(n, de, 0.0, true)
    }

    /// Spacing for which the energy and time windows have equal length,
    /// `n·dE = 2π/dE`.
    pub fn balanced_spacing(n: usize) -> f64 {
        (2.0 * PI / n as f64).sqrt()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn de(&self) -> f64 {
        self.de
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_halfline(&self) -> bool {
        self.halfline
    }

    pub fn energy(&self, j: usize) -> f64 {
        self.offset + j as f64 * self.de
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.energy(j)).collect()
    }

    /// Width `n·dE` of the energy window.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.de
    }

    /// Time lattice dual to this grid under the discrete Fourier transform.
    pub fn dual_lattice(&self) -> TimeLattice {
        TimeLattice::dual(self.n, self.de)
    }

    /// The same grid with every energy moved by `shift`.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.de,
            self.offset + shift,
            self.halfline && self.offset + shift >= 0.0,
        )
    }
}

/// `n` time bins of width `τ`, centred at `t₀ + k·τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLattice {
    n: usize,
    tau: f64,
    t0: f64,
}

impl TimeLattice {
    /// Lattice with `n·τ·dE = 2π`, centred so that bin `⌊n/2⌋` sits at `t = 0`.
    pub fn dual(n: usize, de: f64) -> Self {
        let tau = 2.0 * PI / (n as f64 * de);
        TimeLattice {
            n,
            tau,
            t0: -((n / 2) as f64) * tau,
        }
    }

    /// Lattice from a bin count and width, with the same centring convention.
    pub fn new(n: usize, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("time lattice", "no bins"));
        }
        ensure_positive("tau", tau)?;
        Ok(TimeLattice {
            n,
            tau,
            t0: -((n / 2) as f64) * tau,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn center(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.tau
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.center(k)).collect()
    }

    /// Relative violation of `n·τ·dE = 2π`.
    pub fn duality_defect(&self, de: f64) -> f64 {
        (self.n as f64 * self.tau * de / (2.0 * PI) - 1.0).abs()
    }
}

/// Unit vector of amplitudes over an energy grid (or any orthonormal basis).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm = crate::numerics::norm(&amps);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::StateNorm { norm });
        }
        Ok(StateVector { amps })
    }

    /// Scales the amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = crate::numerics::norm(&amps);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::StateNorm { norm });
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalized(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// The `j`-th basis vector.
    pub fn basis(len: usize, j: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[j] = Complex64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }
}

/// Time evolution `U(t) = exp(+iHt)` with `H` diagonal in the grid basis.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGroup {
    grid: EnergyGrid,
    generator: Vec<f64>,
}

impl UnitaryGroup {
    pub fn new(grid: &EnergyGrid) -> Self {
        UnitaryGroup {
            grid: *grid,
            generator: grid.energies(),
        }
    }

    pub fn grid(&self) -> &EnergyGrid {
        &self.grid
    }

    /// The energies on the diagonal of `H`.
    pub fn generator(&self) -> &[f64] {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    /// Diagonal of `U(t)`.
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.generator
            .iter()
            .map(|&e| Complex64::from_polar(1.0, e * t))
            .collect()
    }

    pub fn matrix(&self, t: f64) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.phases(t))
    }

    pub fn apply(&self, t: f64, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "state does not live on this grid");
        self.phases(t).iter().zip(v).map(|(p, a)| p * a).collect()
    }

    pub fn evolve(&self, t: f64, psi: &StateVector) -> StateVector {
        StateVector {
            amps: self.apply(t, psi.amplitudes()),
        }
    }

    /// `U(t)·A·U(−t)`.
    pub fn conjugate(&self, t: f64, a: &ComplexMatrix) -> ComplexMatrix {
        let p = self.phases(t);
        let mut out = ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| p[i] * a[(i, j)] * p[j].conj());
        if a.is_hermitian() {
            out = out
                .into_hermitian()
                .unwrap_or_else(|e| panic!("conjugation broke Hermiticity: {e}"));
        }
        out
    }

    /// `⟨ψ, H ψ⟩`.
    pub fn mean_energy(&self, psi: &StateVector) -> f64 {
        self.generator
            .iter()
            .zip(psi.amplitudes())
            .map(|(e, a)| e * a.norm_sqr())
            .sum()
    }
}

/// Builds `U(t)` for a grid.
pub fn build_unitary_group(grid: &EnergyGrid) -> UnitaryGroup {
    UnitaryGroup::new(grid)
}
