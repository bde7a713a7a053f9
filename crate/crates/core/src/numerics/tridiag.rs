//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, and
//! eigenvectors by inverse iteration.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{par, Error, Result};

/// Absolute width of the final bisection bracket.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("tridiagonal matrix", "empty diagonal"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        if !diag.iter().chain(&offdiag).all(|x| x.is_finite()) {
            return Err(Error::invalid("tridiagonal matrix", "non-finite entry"));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let x = if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                0.0
            };
            Complex64::new(x, 0.0)
        })
        .into_hermitian()
        .expect("tridiagonal matrices are symmetric")
    }

    /// `T·v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `mu`: the count of negative pivots
    /// in the LDLᵀ factorization of `T − μ`.
    pub fn sturm_count(&self, mu: f64) -> usize {
        let guard = f64::EPSILON * self.scale();
        let mut count = 0;
        let mut pivot = self.diag[0] - mu;
        for i in 0..self.len() {
            if i > 0 {
                let prev = if pivot.abs() < guard {
                    guard.copysign(pivot)
                } else {
                    pivot
                };
                let e = self.offdiag[i - 1];
                pivot = (self.diag[i] - mu) - e * e / prev;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * self.scale() + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        while hi - lo > BISECTION_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues, ascending. Brackets are independent and are
    /// bisected in parallel.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::TooManyEigenvalues {
                requested: k,
                available: self.len(),
            });
        }
        Ok(par::map_range(k, |i| self.eigenvalue(i)))
    }

    /// Eigenvector for an eigenvalue estimate, by inverse iteration. Unit
    /// Euclidean norm; the sign is chosen so the largest component is positive.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            return vec![1.0];
        }
        // nudge off the eigenvalue so the factorization stays nonsingular
        let shift = eigenvalue + 1e-14 * self.scale();
        let lu = PivotedLu::factor(self, shift);
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_749_895).fract())
            .collect();
        for _ in 0..4 {
            x = lu.solve(&x);
            normalize(&mut x);
        }
        let (imax, _) = x
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty");
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// LU factorization of `T − σ` with partial pivoting (the tridiagonal layout
/// gains a second superdiagonal when rows swap).
struct PivotedLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    multipliers: Vec<f64>,
    swapped: Vec<bool>,
}

impl PivotedLu {
    fn factor(t: &SymTridiag, sigma: f64) -> Self {
        let n = t.len();
        let tiny = f64::EPSILON * t.scale();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - sigma).collect();
        let mut du = t.offdiag.clone();
        let mut dl = t.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut multipliers = vec![0.0; n - 1];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let m = dl[i] / d[i];
                multipliers[i] = m;
                d[i + 1] -= m * du[i];
            } else {
                swapped[i] = true;
                let m = d[i] / dl[i];
                multipliers[i] = m;
                d[i] = dl[i];
                let old = d[i + 1];
                d[i + 1] = du[i] - m * old;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du2[i];
                }
                du[i] = old;
            }
            dl[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        PivotedLu {
            d,
            du,
            du2,
            multipliers,
            swapped,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.multipliers[i] * b[i];
            } else {
                b[i + 1] -= self.multipliers[i] * b[i];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.du2[i] * x[i + 2];
            }
            x[i] = acc / self.d[i];
        }
        x
    }
}

/// Convenience wrapper: the `k` smallest eigenvalues of `t`.
pub fn tridiag_lowest_eigs(t: &SymTridiag, k: usize) -> Result<Vec<f64>> {
    t.lowest_eigenvalues(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eigvals;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn laplacian(n: usize, h: f64) -> SymTridiag {
        SymTridiag::new(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1]).unwrap()
    }

    #[test]
    fn dirichlet_laplacian_matches_closed_form() {
        let n = 100;
        let h = 1.0 / 101.0;
        let t = laplacian(n, h);
        let eigs = t.lowest_eigenvalues(5).unwrap();
        for (j, &e) in eigs.iter().enumerate() {
            let exact = (2.0 / (h * h)) * (1.0 - ((j + 1) as f64 * PI / (n as f64 + 1.0)).cos());
            assert!((e - exact).abs() <= 1e-9, "j={j} {e} vs {exact}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let t = SymTridiag::new(vec![5.0; 4], vec![0.0; 3]).unwrap();
        let eigs = t.lowest_eigenvalues(3).unwrap();
        assert!(eigs.iter().all(|e| (e - 5.0).abs() <= 1e-12));
    }

    #[test]
    fn agrees_with_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let t = SymTridiag::new(
            (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
            (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let dense = hermitian_eigvals(&t.to_dense()).unwrap();
        let sturm = t.lowest_eigenvalues(n).unwrap();
        for (a, b) in sturm.iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn sturm_count_matches_dense_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 30;
        let t = SymTridiag::new(
            (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
            (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let dense = hermitian_eigvals(&t.to_dense()).unwrap();
        for _ in 0..200 {
            let mu: f64 = rng.random_range(-5.0..5.0);
            let below = dense.iter().filter(|&&e| e < mu).count();
            // skip probes that land on an eigenvalue within rounding
            if dense.iter().any(|e| (e - mu).abs() < 1e-9) {
                continue;
            }
            assert_eq!(t.sturm_count(mu), below);
        }
    }

    #[test]
    fn inverse_iteration_vector() {
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let t = laplacian(n, h);
        let e = t.eigenvalue(0);
        let v = t.eigenvector(e);
        let tv = t.apply(&v);
        let residual = tv.iter().zip(&v).map(|(a, b)| (a - e * b).abs()).fold(0.0, f64::max);
        assert!(residual <= 1e-9 * 4.0 / (h * h), "residual {residual}");
        // ground state is the first sine mode
        let norm = (2.0 / (n as f64 + 1.0)).sqrt();
        for (j, &x) in v.iter().enumerate() {
            let exact = norm * ((j + 1) as f64 * PI * h).sin();
            assert!((x - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
        let t = SymTridiag::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        assert_eq!(
            t.lowest_eigenvalues(3),
            Err(Error::TooManyEigenvalues {
                requested: 3,
                available: 2
            })
        );
    }
}
