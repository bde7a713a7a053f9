//! Covariant time observables on discretized quantum models.
//!
//! The crate builds time-translation covariant POVMs on a finite energy grid,
//! realizes their covariant dilation to a sharp time observable, and checks the
//! time-energy uncertainty relations that follow from it:
//!
//! - `Δ(T)·Δ(H) ≥ 1/2` for any covariant time observable,
//! - `Δ(T)·⟨H⟩ ≥ d` with `d = √(4λ₁³/27) ≈ 1.376` when `H ≥ 0`,
//! - `Δ(T)²·⟨H²⟩ ≥ 9/4` for positive Hamiltonians,
//!
//! where `-λ₁` is the first zero of the Airy function. The [`airy`] module
//! computes that constant from a Dirichlet finite-difference operator and
//! cross-checks it with an independent variational descent.
//!
//! Units: `ħ = 1`. Time evolution is `U(t) = exp(+iHt)`, which makes the
//! covariance law read `U(t) F(B) U(-t) = F(B + t)` with the Fourier kernel
//! `exp(-iEt)` from energy to time. Flipping that convention flips the time
//! axis of every occurrence distribution.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod dilation;
mod error;
pub mod model;
pub mod numerics;
pub mod par;
pub mod report;
pub mod uncertainty;

pub use error::{Error, Result};
pub use num_complex::Complex64;
