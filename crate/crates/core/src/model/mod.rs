//! Energy grids, time evolution, and covariant POVMs on a time lattice.

mod format;
mod grid;
mod povm;
mod states;

pub use format::{read_povm, write_povm, PovmDocument};
pub use grid::{build_unitary_group, EnergyGrid, StateVector, TimeLattice, UnitaryGroup, NORM_TOLERANCE};
pub use povm::{
    balanced_halfline_povm, balanced_sharp_povm, build_halfline_povm, build_sharp_time_povm, phase_profile,
    validate_povm, validate_povm_with, vector_generated_povm, Axiom, CovariantPOVM, EffectSet, ValidationReport,
    POVM_TOLERANCE,
};
pub use states::{balanced_width, gaussian_state, random_smooth_state, wave_packets, GaussianState, Packet};
