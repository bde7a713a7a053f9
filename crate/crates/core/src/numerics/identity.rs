//! The scalar identity `a·b² = inf_{λ>0} 4/(27λ²)·(a + λb)³`, attained at
//! `λ = 2a/b`.

use crate::error::ensure_positive;
use crate::Result;

/// `4/(27λ²)·(a + λb)³`.
pub fn product_bound(a: f64, b: f64, lambda: f64) -> f64 {
    let s = a + lambda * b;
    4.0 / (27.0 * lambda * lambda) * s * s * s
}

/// Returns `(a·b², 2a/b)`: the infimum over `λ` and where it is attained.
pub fn min_product_identity(a: f64, b: f64) -> Result<(f64, f64)> {
    ensure_positive("a", a)?;
    ensure_positive("b", b)?;
    Ok((a * b * b, 2.0 * a / b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_cases() {
        assert_eq!(min_product_identity(2.0, 1.0).unwrap(), (2.0, 4.0));
        assert!((product_bound(2.0, 1.0, 4.0) - 2.0).abs() < 1e-15);
        assert_eq!(min_product_identity(3.0, 3.0).unwrap(), (27.0, 2.0));
        assert!((product_bound(3.0, 3.0, 2.0) - 27.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(min_product_identity(0.0, 1.0).is_err());
        assert!(min_product_identity(1.0, -2.0).is_err());
        assert!(min_product_identity(f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn bound_dominates_product(a in 1e-3f64..10.0, b in 1e-3f64..10.0, log_l in -8.0f64..8.0) {
            let lambda = log_l.exp();
            let (inf, _) = min_product_identity(a, b).unwrap();
            prop_assert!(product_bound(a, b, lambda) >= inf * (1.0 - 1e-14));
        }

        #[test]
        fn equality_at_argmin(a in 1e-3f64..10.0, b in 1e-3f64..10.0) {
            let (inf, lambda) = min_product_identity(a, b).unwrap();
            prop_assert!((product_bound(a, b, lambda) - inf).abs() <= 1e-13 * inf.max(1.0));
        }
    }
}
