use std::fmt::Write;

use num_complex::Complex64;

use super::operator::interior_nodes;
use crate::error::ensure_positive;
use crate::model::{EnergyGrid, StateVector};
use crate::{Error, Result};

/// Largest norm change tolerated from resampling before renormalizing.
pub const RESAMPLING_TOLERANCE: f64 = 1e-4;

/// A real wave function on the interior nodes `x_j = j·h` of `[0, L]`, with
/// unit norm `h·Σ φ_j² = 1` and zero boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    values: Vec<f64>,
    h: f64,
    length: f64,
}

/// Expectations entering the product functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductFunctional {
    /// `(φ, −φ″)` with the second-difference stencil.
    pub kinetic: f64,
    /// `⟨x⟩`.
    pub position: f64,
    /// `⟨x²⟩`.
    pub second_moment: f64,
    /// `kinetic·⟨x⟩²`.
    pub product: f64,
    /// `kinetic·⟨x²⟩`.
    pub combined: f64,
}

impl GridState {
    /// Scales `values` to unit norm.
    pub fn normalized(mut values: Vec<f64>, h: f64, length: f64) -> Result<Self> {
        ensure_positive("h", h)?;
        let m = interior_nodes(h, length)?;
        if values.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: values.len(),
            });
        }
        let norm = (h * values.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::StateNorm { norm });
        }
        values.iter_mut().for_each(|v| *v /= norm);
        Ok(GridState { values, h, length })
    }

    /// Samples `f` on the interior nodes and normalizes.
    pub fn from_fn(f: impl Fn(f64) -> f64, h: f64, length: f64) -> Result<Self> {
        let m = interior_nodes(h, length)?;
        Self::normalized((1..=m).map(|j| f(j as f64 * h)).collect(), h, length)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.h
    }

    /// `h·Σ φ_j ψ_j`.
    pub fn overlap(&self, other: &GridState) -> f64 {
        self.h * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Linear interpolation with the boundary zeros, and zero outside `[0, L]`.
    pub fn value_at(&self, x: f64) -> f64 {
        interpolate(&self.values, self.h, x)
    }

    pub fn product_functional(&self) -> ProductFunctional {
        product_functional(self)
    }

    /// Maps `[0, extent]` onto the lowest `fill` fraction of a half-line
    /// energy grid, `ψ_j ∝ φ((E_j − E_0)/s)` with `s = fill·range/extent`.
    /// The product `Δ(T)·⟨H − E_0⟩` is unchanged by the scale `s`.
    pub fn transport(&self, grid: &EnergyGrid, extent: f64, fill: f64) -> Result<StateVector> {
        ensure_positive("extent", extent)?;
        ensure_positive("fill", fill)?;
        let scale = fill * grid.extent() / extent;
        let floor = grid.offset();
        StateVector::normalized(
            grid.energies()
                .iter()
                .map(|e| Complex64::new(self.value_at((e - floor) / scale), 0.0))
                .collect(),
        )
    }

    /// Two tab-separated columns `x` and `phi`, with a header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("x\tphi\n");
        for (j, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.6e}\t{:.16e}", self.x(j), v).expect("writing to a String");
        }
        out
    }
}

fn interpolate(values: &[f64], h: f64, x: f64) -> f64 {
    let m = values.len();
    let s = x / h;
    if !(s > 0.0 && s < (m + 1) as f64) {
        return 0.0;
    }
    let i = s.floor() as usize;
    let frac = s - i as f64;
    // node i sits at x = i·h; nodes 0 and m + 1 are the walls
    let at = |k: usize| if k == 0 || k > m { 0.0 } else { values[k - 1] };
    (1.0 - frac) * at(i) + frac * at(i + 1)
}

pub fn product_functional(phi: &GridState) -> ProductFunctional {
    let v = &phi.values;
    let h = phi.h;
    let mut diffs = v[0] * v[0] + v[v.len() - 1] * v[v.len() - 1];
    diffs += v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>();
    let kinetic = diffs / h;
    let mut position = 0.0;
    let mut second_moment = 0.0;
    for (j, a) in v.iter().enumerate() {
        let x = phi.x(j);
        position += x * a * a;
        second_moment += x * x * a * a;
    }
    position *= h;
    second_moment *= h;
    ProductFunctional {
        kinetic,
        position,
        second_moment,
        product: kinetic * position * position,
        combined: kinetic * second_moment,
    }
}

/// Unitary dilation `(D(μ)φ)(x) = √μ·φ(μx)`, sampled on the same nodes by
/// linear interpolation and renormalized.
pub fn scaling_transform(phi: &GridState, mu: f64) -> Result<GridState> {
    ensure_positive("mu", mu)?;
    let values = resample(&phi.values, phi.h, mu);
    let norm = (phi.h * values.iter().map(|v| v * v).sum::<f64>()).sqrt();
    if !((norm - 1.0).abs() <= RESAMPLING_TOLERANCE) {
        return Err(Error::ScalingUndersampled { mu, norm });
    }
    GridState::normalized(values, phi.h, phi.length)
}

pub(crate) fn resample(values: &[f64], h: f64, mu: f64) -> Vec<f64> {
    let root = mu.sqrt();
    (1..=values.len())
        .map(|j| root * interpolate(values, h, mu * j as f64 * h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::{minimal_state, DirichletOperator};
    use std::f64::consts::PI;

    #[test]
    fn sine_mode_closed_form() {
        let s = GridState::from_fn(|x| 2f64.sqrt() * (PI * x).sin(), 1e-3, 1.0).unwrap();
        let f = s.product_functional();
        assert!((f.kinetic - PI * PI).abs() / (PI * PI) < 1e-6);
        assert!((f.position - 0.5).abs() < 1e-12);
        assert!((f.product - PI * PI / 4.0).abs() / (PI * PI / 4.0) < 1e-6);
    }

    #[test]
    fn minimal_state_product() {
        let f = minimal_state(1e-3, 20.0).unwrap().product_functional();
        assert!((f.product - 1.8935).abs() < 5e-4, "{}", f.product);
        assert!((f.product.sqrt() - 1.376).abs() < 1e-3);
    }

    #[test]
    fn scaling_by_two() {
        let s = minimal_state(1e-3, 20.0).unwrap();
        let f = s.product_functional();
        let g = scaling_transform(&s, 2.0).unwrap().product_functional();
        assert!((g.kinetic / f.kinetic - 4.0).abs() / 4.0 < 1e-6);
        assert!((g.position / f.position - 0.5).abs() / 0.5 < 1e-6);
    }

    #[test]
    fn scaling_identity_and_invariance() {
        let s = minimal_state(1e-3, 20.0).unwrap();
        let same = scaling_transform(&s, 1.0).unwrap();
        assert!(same.values().iter().zip(s.values()).all(|(a, b)| (a - b).abs() < 1e-14));
        let p = s.product_functional().product;
        for mu in [0.5, 0.8, 1.3, 2.0] {
            let q = scaling_transform(&s, mu).unwrap().product_functional().product;
            // the stencil and the interpolation are both second order
            assert!((q - p).abs() / p < 1e-5, "mu={mu}: {}", (q - p).abs() / p);
        }
    }

    #[test]
    fn undersampled_scaling_is_rejected() {
        let s = minimal_state(0.1, 20.0).unwrap();
        assert!(matches!(
            scaling_transform(&s, 0.2),
            Err(Error::ScalingUndersampled { .. })
        ));
    }

    #[test]
    fn operator_conjugation() {
        // D(μ)⁻¹·(−d² + λx)·D(μ) = λ^{2/3}·(−d² + x) with μ = λ^{1/3}
        let (h, length, lambda) = (1e-3, 20.0, 8.0);
        let mu: f64 = 2.0;
        let phi = minimal_state(h, length).unwrap();
        let big = DirichletOperator::airy(h, length, lambda).unwrap();
        let unit = DirichletOperator::airy(h, length, 1.0).unwrap();
        let lhs = resample(&big.matrix().apply(&resample(phi.values(), h, mu)), h, 1.0 / mu);
        let rhs: Vec<f64> = unit.matrix().apply(phi.values()).iter().map(|v| v * 4.0).collect();
        let worst = lhs
            .iter()
            .zip(&rhs)
            .take(9000)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "{worst}");
    }

    #[test]
    fn transport_keeps_dirichlet_boundary() {
        let full = EnergyGrid::full_line(512, EnergyGrid::balanced_spacing(512)).unwrap();
        let half = EnergyGrid::new(256, full.de(), 0.0, true).unwrap();
        let psi = minimal_state(1e-3, 20.0).unwrap().transport(&half, 11.3, 0.9).unwrap();
        assert_eq!(psi.amplitudes()[0], Complex64::new(0.0, 0.0));
        assert!(psi.amplitudes()[255].norm() < 1e-10);
    }

    #[test]
    fn tsv_has_header_and_rows() {
        let s = minimal_state(0.1, 20.0).unwrap();
        let text = s.to_tsv();
        assert!(text.starts_with("x\tphi\n"));
        assert_eq!(text.lines().count(), s.values().len() + 1);
    }
}
