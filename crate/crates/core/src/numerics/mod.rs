//! Linear-algebra and special-function kernel.

mod airy_fn;
mod identity;
mod jacobi;
mod matrix;
mod tridiag;

pub use airy_fn::{airy_ai, airy_ai_pair, airy_origin, airy_zero, gamma, MAX_ZERO_INDEX};
pub use identity::{min_product_identity, product_bound};
pub use jacobi::{hermitian_eigh, hermitian_eigvals, Spectrum};
pub use matrix::{inner, norm, ComplexMatrix, HERMITIAN_TOLERANCE};
pub use tridiag::{tridiag_lowest_eigs, SymTridiag, BISECTION_TOLERANCE};
