//! Occurrence-time statistics and the time-energy uncertainty bounds.

mod bounds;
mod ccr;
mod distribution;

pub use bounds::{
    check_bound, check_combined_bound, check_positive_energy_bound, check_time_energy_bound, d_constant,
    dilation_time_defect, tail_mass, Bound, BoundReport, TailMass, TAIL_FRACTION, TAIL_LIMIT,
};
pub use ccr::{ccr_residual, PositionGrid, BOUNDARY_LIMIT};
pub use distribution::{
    energy_moments, energy_moments_shifted, occurrence_distribution, time_uncertainty, EnergyMoments,
    OccurrenceDistribution, CLIP_TOLERANCE, MASS_TOLERANCE, RENORMALIZE_TOLERANCE,
};
