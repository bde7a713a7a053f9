use num_complex::Complex64;

use crate::error::ensure_positive;
use crate::model::StateVector;
use crate::numerics::inner;
use crate::{Error, Result};

/// Boundary probability above which the form is not evaluated.
pub const BOUNDARY_LIMIT: f64 = 1e-8;

/// Uniform position grid `x_j = x0 + j·h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionGrid {
    pub n: usize,
    pub h: f64,
    pub x0: f64,
}

impl PositionGrid {
    pub fn new(n: usize, h: f64, x0: f64) -> Result<Self> {
        ensure_positive("h", h)?;
        if n < 5 {
            return Err(Error::invalid(
                "position grid",
                format!("need at least 5 points, got {n}"),
            ));
        }
        Ok(PositionGrid { n, h, x0 })
    }

    /// `n` points spaced by `h`, symmetric about zero.
    pub fn centred(n: usize, h: f64) -> Result<Self> {
        Self::new(n, h, -0.5 * (n - 1) as f64 * h)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.h
    }

    /// Amplitudes `√h·φ(x_j)`, normalized.
    pub fn sample(&self, phi: impl Fn(f64) -> Complex64) -> Result<StateVector> {
        StateVector::normalized((0..self.n).map(|j| phi(self.x(j)) * self.h.sqrt()).collect())
    }

    fn momentum(&self, a: &[Complex64]) -> Vec<Complex64> {
        let scale = Complex64::new(0.0, -0.5 / self.h);
        (0..self.n)
            .map(|j| {
                let next = if j + 1 < self.n {
                    a[j + 1]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let prev = if j > 0 { a[j - 1] } else { Complex64::new(0.0, 0.0) };
                scale * (next - prev)
            })
            .collect()
    }

    fn position(&self, a: &[Complex64]) -> Vec<Complex64> {
        a.iter().enumerate().map(|(j, z)| z * self.x(j)).collect()
    }
}

fn boundary_mass(a: &[Complex64]) -> f64 {
    let n = a.len();
    [0, 1, n - 2, n - 1].iter().map(|&j| a[j].norm_sqr()).sum()
}

/// `(xΦ, PΨ) − (PΦ, xΨ) − i(Φ, Ψ)` with `P = (1/i)d/dx` by central
/// differences. Zero in the continuum; `O(h²)` on the grid.
pub fn ccr_residual(phi: &StateVector, psi: &StateVector, grid: &PositionGrid) -> Result<Complex64> {
    for v in [phi, psi] {
        if v.len() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                found: v.len(),
            });
        }
        let mass = boundary_mass(v.amplitudes());
        if mass > BOUNDARY_LIMIT {
            return Err(Error::BoundaryMass { mass });
        }
    }
    let (a, b) = (phi.amplitudes(), psi.amplitudes());
    let form = inner(&grid.position(a), &grid.momentum(b)) - inner(&grid.momentum(a), &grid.position(b));
    Ok(form - Complex64::i() * inner(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x: f64) -> Complex64 {
        Complex64::new((-0.5 * x * x).exp(), 0.0)
    }

    #[test]
    fn residual_converges_quadratically() {
        let coarse = PositionGrid::centred(161, 0.1).unwrap();
        let fine = PositionGrid::centred(321, 0.05).unwrap();
        let r = |g: &PositionGrid| {
            let s = g.sample(gaussian).unwrap();
            ccr_residual(&s, &s, g).unwrap().norm()
        };
        let ratio = r(&coarse) / r(&fine);
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn self_form_is_i() {
        let g = PositionGrid::centred(321, 0.05).unwrap();
        let s = g.sample(|x| gaussian(x) * Complex64::from_polar(1.0, 0.3 * x)).unwrap();
        let res = ccr_residual(&s, &s, &g).unwrap();
        assert!(res.norm() < 1e-3);
    }

    #[test]
    fn disjoint_supports_give_zero() {
        let g = PositionGrid::centred(401, 0.05).unwrap();
        let left = g.sample(|x| gaussian(4.0 * (x + 5.0))).unwrap();
        let right = g.sample(|x| gaussian(4.0 * (x - 5.0))).unwrap();
        assert!(ccr_residual(&left, &right, &g).unwrap().norm() < 1e-15);
    }

    #[test]
    fn boundary_mass_is_rejected() {
        let g = PositionGrid::centred(21, 0.1).unwrap();
        let s = g.sample(gaussian).unwrap();
        assert!(matches!(ccr_residual(&s, &s, &g), Err(Error::BoundaryMass { .. })));
    }
}
