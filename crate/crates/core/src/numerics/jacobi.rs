//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation. The sweep order is
//! fixed, so identical input gives bit-identical output.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;
const OFF_DIAGONAL_TARGET: f64 = 1e-15;

/// Eigenvalues in ascending order with optional orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<ComplexMatrix>,
}

impl Spectrum {
    /// `‖AV − VΛ‖_max`, or `None` without eigenvectors.
    pub fn residual(&self, a: &ComplexMatrix) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        let av = a.matmul(v);
        let mut worst: f64 = 0.0;
        for i in 0..v.rows() {
            for (j, &lambda) in self.eigenvalues.iter().enumerate() {
                worst = worst.max((av[(i, j)] - v[(i, j)] * lambda).norm());
            }
        }
        Some(worst)
    }

    /// `‖V†V − 1‖_max`, or `None` without eigenvectors.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        Some(v.adjoint().matmul(v).distance_from_identity())
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The matrix must carry the Hermitian flag (see [`ComplexMatrix::into_hermitian`]);
/// otherwise the call is rejected with the measured asymmetry.
pub fn hermitian_eigh(a: &ComplexMatrix) -> Result<Spectrum> {
    if !a.is_square() || !a.is_hermitian() {
        return Err(Error::NotHermitian {
            asymmetry: a.asymmetry(),
        });
    }
    let n = a.dim();
    if n == 0 {
        return Err(Error::invalid("matrix", "dimension must be at least 1"));
    }

    let mut m: Vec<Complex64> = a.as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n).as_slice().to_vec();
    let frobenius = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TARGET * frobenius;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[p * n + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut m, &mut v, n, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.total_cmp(&m[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| m[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(eigenvectors),
    })
}

/// Eigenvalues only.
pub fn hermitian_eigvals(a: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigh(a).map(|s| s.eigenvalues)
}

fn rotate(m: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) -> bool {
    let g = m[p * n + q];
    let abs_g = g.norm();
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    // below this the rotation cannot change any entry in floating point
    if abs_g == 0.0 || abs_g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[p * n + q] = Complex64::new(0.0, 0.0);
        m[q * n + p] = Complex64::new(0.0, 0.0);
        return false;
    }
    let phase = g / abs_g;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let w_qp = -s * phase.conj();
    let w_qq = c * phase.conj();

    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = akp * c + akq * w_qp;
        m[k * n + q] = akp * s + akq * w_qq;
    }
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = apk * c + aqk * w_qp.conj();
        m[q * n + k] = apk * s + aqk * w_qq.conj();
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * w_qp;
        v[k * n + q] = vkp * s + vkq * w_qq;
    }
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p].im = 0.0;
    m[q * n + q].im = 0.0;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        raw.add(&raw.adjoint()).into_hermitian().unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let s = hermitian_eigh(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn swap_matrix() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
            .unwrap()
            .into_hermitian()
            .unwrap();
        let s = hermitian_eigh(&a).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_needs_complex_rotation() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, -1.0),
            (1, 0) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        })
        .into_hermitian()
        .unwrap();
        let s = hermitian_eigh(&a).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!(s.residual(&a).unwrap() < 1e-15);
    }

    #[test]
    fn random_hermitian_residuals() {
        for seed in 0..5 {
            let a = random_hermitian(8, seed);
            let s = hermitian_eigh(&a).unwrap();
            assert!(s.residual(&a).unwrap() <= 1e-10, "seed {seed}");
            assert!(s.orthonormality_defect().unwrap() <= 1e-10);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            // trace is preserved
            let trace: f64 = (0..8).map(|i| a[(i, i)].re).sum();
            let sum: f64 = s.eigenvalues.iter().sum();
            assert!((trace - sum).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_projector_spectrum() {
        let v = [
            Complex64::new(0.5, 0.5),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.0),
        ];
        let p = ComplexMatrix::outer(&v, &v).into_hermitian().unwrap();
        let s = hermitian_eigh(&p).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-15 && s.eigenvalues[1].abs() < 1e-15);
        assert!((s.eigenvalues[2] - 1.0).abs() < 1e-15);
        assert!(s.orthonormality_defect().unwrap() < 1e-14);
    }

    #[test]
    fn deterministic() {
        let a = random_hermitian(12, 99);
        assert_eq!(hermitian_eigh(&a).unwrap(), hermitian_eigh(&a).unwrap());
    }

    #[test]
    fn rejects_unflagged_input() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 2.0, 0.0]).unwrap();
        match hermitian_eigh(&a) {
            Err(Error::NotHermitian { asymmetry }) => assert_eq!(asymmetry, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
