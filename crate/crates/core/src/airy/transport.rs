use crate::model::{EnergyGrid, StateVector};
use crate::numerics::airy_zero;
use crate::Result;

use super::minimize::{minimize_combined, Method};
use super::operator::minimal_state;

/// Fraction of a half-line energy window filled by a transported state.
pub const FILL: f64 = 0.9;
/// `Ai(x − λ₁)` is below `1e-8` of its peak beyond `x = λ₁ + 9`.
pub const MINIMAL_STATE_MARGIN: f64 = 9.0;
/// `x·exp(−x²/2)` is below `1e-12` of its peak beyond `x = 8`.
pub const COMBINED_EXTENT: f64 = 8.0;

/// The grid minimal state moved onto a half-line energy grid.
pub fn transported_minimal_state(grid: &EnergyGrid, h: f64, length: f64) -> Result<StateVector> {
    let extent = airy_zero(1)? + MINIMAL_STATE_MARGIN;
    minimal_state(h, length)?.transport(grid, extent, FILL)
}

/// The spectral minimizer of `kinetic·⟨x²⟩` moved onto a half-line energy grid.
pub fn transported_combined_minimizer(grid: &EnergyGrid, h: f64, length: f64) -> Result<StateVector> {
    minimize_combined(h, length, Method::Spectral)?
        .state
        .transport(grid, COMBINED_EXTENT, FILL)
}
