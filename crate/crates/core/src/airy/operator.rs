use crate::error::ensure_positive;
use crate::numerics::{airy_zero, SymTridiag};
use crate::{Error, Result};

use super::state::GridState;

/// Potential term of `−d²/dx² + V(x)` on `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// `V(x) = λ·x`.
    Linear(f64),
    /// `V(x) = c·x²`.
    Quadratic(f64),
}

impl Potential {
    pub fn at(self, x: f64) -> f64 {
        match self {
            Potential::Linear(lambda) => lambda * x,
            Potential::Quadratic(c) => c * x * x,
        }
    }

    fn coefficient(self) -> f64 {
        match self {
            Potential::Linear(v) | Potential::Quadratic(v) => v,
        }
    }

    /// Domain length that keeps the `k`-th eigenfunction clear of the far
    /// wall: twice the classical turning point plus five decay lengths.
    pub fn required_length(self, k: usize) -> Result<f64> {
        match self {
            Potential::Linear(lambda) => Ok((2.0 * airy_zero(k)? + 5.0) * lambda.powf(-1.0 / 3.0)),
            Potential::Quadratic(c) => {
                // odd oscillator levels (4k − 1)·√c
                let e = (4 * k - 1) as f64 * c.sqrt();
                Ok(2.0 * (e / c).sqrt() + 5.0 * c.powf(-0.25))
            }
        }
    }
}

/// Three-point finite-difference `−d²/dx² + V` with Dirichlet walls at `0` and
/// `L`, on the interior nodes `x_j = j·h`, `j = 1..=m` with `m = round(L/h) − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletOperator {
    h: f64,
    length: f64,
    potential: Potential,
    matrix: SymTridiag,
}

impl DirichletOperator {
    pub fn new(h: f64, length: f64, potential: Potential) -> Result<Self> {
        ensure_positive("h", h)?;
        ensure_positive("L", length)?;
        ensure_positive("potential coefficient", potential.coefficient())?;
        let m = interior_nodes(h, length)?;
        let diag = (1..=m).map(|j| 2.0 / (h * h) + potential.at(j as f64 * h)).collect();
        let offdiag = vec![-1.0 / (h * h); m - 1];
        Ok(DirichletOperator {
            h,
            length,
            potential,
            matrix: SymTridiag::new(diag, offdiag)?,
        })
    }

    /// The linear-potential operator `−d²/dx² + λx`.
    pub fn airy(h: f64, length: f64, lambda: f64) -> Result<Self> {
        Self::new(h, length, Potential::Linear(lambda))
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn potential(&self) -> Potential {
        self.potential
    }

    pub fn matrix(&self) -> &SymTridiag {
        &self.matrix
    }

    pub fn nodes(&self) -> usize {
        self.matrix.len()
    }

    /// Rejects domains too short for the lowest `k` levels.
    pub fn ensure_domain(&self, k: usize) -> Result<()> {
        let required = self.potential.required_length(k)?;
        if self.length < required {
            return Err(Error::DomainTooShort {
                length: self.length,
                required,
            });
        }
        Ok(())
    }

    /// The `k` lowest eigenvalues, ascending.
    pub fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        self.ensure_domain(k)?;
        self.matrix.lowest_eigenvalues(k)
    }

    /// Normalized eigenfunction of level `n` (1-based), positive near `x = 0`.
    pub fn eigenstate(&self, n: usize) -> Result<(f64, GridState)> {
        self.ensure_domain(n)?;
        let eigenvalue = self.matrix.eigenvalue(n - 1);
        let mut v = self.matrix.eigenvector(eigenvalue);
        if v.iter().find(|x| x.abs() > 1e-8).is_some_and(|&x| x < 0.0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok((eigenvalue, GridState::normalized(v, self.h, self.length)?))
    }
}

pub(crate) fn interior_nodes(h: f64, length: f64) -> Result<usize> {
    let cells = (length / h).round();
    if cells < 3.0 {
        return Err(Error::invalid(
            "domain",
            format!("L = {length} holds fewer than 3 cells of width {h}"),
        ));
    }
    Ok(cells as usize - 1)
}

/// The `k` lowest eigenvalues of `−d²/dx² + λx` on `[0, L]`.
pub fn airy_operator_spectrum(h: f64, length: f64, lambda: f64, k: usize) -> Result<Vec<f64>> {
    DirichletOperator::airy(h, length, lambda)?.lowest(k)
}

/// Normalized ground state of `−d²/dx² + x` on `[0, L]`, the grid version of
/// `Ai(x − λ₁)`.
pub fn minimal_state(h: f64, length: f64) -> Result<GridState> {
    Ok(DirichletOperator::airy(h, length, 1.0)?.eigenstate(1)?.1)
}

/// Ground energy of `−d²/dx² + x²` on `[0, L]`; 3 in the continuum.
pub fn dirichlet_oscillator_ground(h: f64, length: f64) -> Result<f64> {
    Ok(DirichletOperator::new(h, length, Potential::Quadratic(1.0))?.lowest(1)?[0])
}

/// Tab-separated table `n, eigenvalue, airy_zero, error` for the levels of
/// `−d²/dx² + x`, with a header.
pub fn spectrum_tsv(eigenvalues: &[f64]) -> Result<String> {
    let mut out = String::from("n\teigenvalue\tairy_zero\terror\n");
    for (i, &e) in eigenvalues.iter().enumerate() {
        let z = airy_zero(i + 1)?;
        out.push_str(&format!("{}\t{:.16e}\t{:.16e}\t{:.6e}\n", i + 1, e, z, e - z));
    }
    Ok(out)
}
