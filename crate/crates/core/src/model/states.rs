//! Test states on an energy grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{EnergyGrid, StateVector};
use crate::error::ensure_positive;
use crate::Result;

/// A Gaussian wave packet and whether its width resolves on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub state: StateVector,
    /// Set when the width is below two grid spacings.
    pub degenerate: bool,
}

/// Normalized amplitudes `exp(−(E − center)²/(4·width²))`, so that `width`
/// is the energy spread `Δ(H)` in the broad-grid limit. On a half-line grid
/// the boundary amplitude is zero.
pub fn gaussian_state(grid: &EnergyGrid, center: f64, width: f64) -> Result<GaussianState> {
    ensure_positive("width", width)?;
    let state = wave_packets(grid, &[Packet::new(center, width)])?;
    Ok(GaussianState {
        state,
        degenerate: width < 2.0 * grid.de(),
    })
}

/// One Gaussian component of a superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub center: f64,
    pub width: f64,
    /// Time shift: the packet is `U(time)` applied to the centred profile.
    pub time: f64,
    pub weight: Complex64,
}

impl Packet {
    pub fn new(center: f64, width: f64) -> Self {
        Packet {
            center,
            width,
            time: 0.0,
            weight: Complex64::new(1.0, 0.0),
        }
    }
}

/// Normalized superposition of Gaussian packets.
pub fn wave_packets(grid: &EnergyGrid, packets: &[Packet]) -> Result<StateVector> {
    let mut amps: Vec<Complex64> = grid
        .energies()
        .into_iter()
        .map(|e| {
            packets
                .iter()
                .map(|p| {
                    let z = (e - p.center) / p.width;
                    p.weight * Complex64::from_polar((-0.25 * z * z).exp(), e * p.time)
                })
                .sum()
        })
        .collect();
    if grid.is_halfline() {
        amps[0] = Complex64::new(0.0, 0.0);
    }
    StateVector::normalized(amps)
}

/// Energy width at which a packet occupies the same fraction of the energy
/// window as of the time window `2π/dE`.
pub fn balanced_width(grid: &EnergyGrid) -> f64 {
    (grid.extent() * grid.de() / (4.0 * PI)).sqrt()
}

/// A seeded random superposition of one to three Gaussian packets, kept well
/// inside both the energy window and the time window.
///
/// On a full-line grid the centres lie within `±15%` of the energy window and
/// the time shifts within `±15%` of the time window. On a half-line grid the
/// centres keep eight widths of clearance from `E = 0` and stay below 85% of
/// the window.
pub fn random_smooth_state(grid: &EnergyGrid, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma0 = balanced_width(grid);
    let range_e = grid.extent();
    let range_t = 2.0 * PI / grid.de();
    let count = rng.random_range(1..=3usize);
    let packets: Vec<Packet> = (0..count)
        .map(|_| {
            let width = sigma0 * rng.random_range(0.7..1.4);
            let center = if grid.is_halfline() {
                let lo = 8.0 * width;
                let hi = (0.85 * range_e - 8.0 * width).max(lo);
                grid.offset() + rng.random_range(lo..=hi)
            } else {
                rng.random_range(-0.15..0.15) * range_e
            };
            Packet {
                center,
                width,
                time: rng.random_range(-0.15..0.15) * range_t,
                weight: Complex64::from_polar(rng.random_range(0.3..1.0), rng.random_range(0.0..2.0 * PI)),
            }
        })
        .collect();
    wave_packets(grid, &packets).expect("packets inside the window have positive norm")
}
