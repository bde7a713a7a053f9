//! The half-line variational problem behind the positive-energy bound.
//!
//! On `L²(0, ∞)` with a Dirichlet wall at `0`, the time spread of a state
//! becomes the kinetic term `(φ, −φ″)` and the mean energy becomes `⟨x⟩`. The
//! bound constant is `inf kinetic·⟨x⟩² = 4λ₁³/27`, where `λ₁` is the ground
//! eigenvalue of `−d²/dx² + x`, attained by `Ai(x − λ₁)`.
//! Everything here is discretized with the three-point stencil on `[0, L]`.

mod identity;
mod minimize;
mod operator;
mod state;
mod transport;

pub use identity::{verify_min_identity_chain, ChainCheck, ChainReport, SCAN_POINTS, SCAN_RANGE};
pub use minimize::{
    minimize, minimize_combined, minimize_product, Functional, Method, Minimum, MAX_ITERATIONS, RESTARTS, STOP_DECREASE,
};
pub use operator::{
    airy_operator_spectrum, dirichlet_oscillator_ground, minimal_state, spectrum_tsv, DirichletOperator, Potential,
};
pub use state::{product_functional, scaling_transform, GridState, ProductFunctional, RESAMPLING_TOLERANCE};
pub use transport::{
    transported_combined_minimizer, transported_minimal_state, COMBINED_EXTENT, FILL, MINIMAL_STATE_MARGIN,
};
