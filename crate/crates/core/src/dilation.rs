//! Covariant dilation of a lattice POVM to a sharp time observable.
//!
//! The raw space holds functions from bins to `H` with the positive
//! semidefinite form `⟨Φ, Ψ⟩ = Σ_k (Φ(t_k), F_k Ψ(t_k))`. Its Gram matrix is
//! block diagonal with blocks `F_k`, so the null-space quotient is built one
//! bin at a time: if `F_k = Σ_a σ_a u_a u_a†`, the vectors `u_a/√σ_a` placed in
//! bin `k` form an orthonormal basis of the quotient. In those coordinates
//!
//! - `E(B)` is the coordinate projection onto the bins of `B`,
//! - `(VΦ)(s) = U(τ)Φ(s − τ)` has block `√(σ_b/σ_a)·u_b†U(τ)u_a` from bin `k`
//!   to bin `k + 1` (periodic),
//! - `ψ ∈ H` embeds as the constant function, with coordinates `√σ_a·u_a†ψ`,
//! - `PΦ` is the constant function with value `Σ_k F_k Φ(t_k)`.

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CovariantPOVM, StateVector, UnitaryGroup};
use crate::numerics::{hermitian_eigh, ComplexMatrix};
use crate::report::Record;
use crate::{par, Error, Result};

/// Relative threshold below which Gram eigenvalues count as null.
pub const GRAM_THRESHOLD: f64 = 1e-12;
/// Gram eigenvalues below this are treated as a broken POVM, not rounding.
pub const INDEFINITE_LIMIT: f64 = -1e-8;

/// Eigenvalue bookkeeping of the Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramStructure {
    pub kept_eigenvalues: Vec<f64>,
    pub discarded_count: usize,
    pub min_eigenvalue: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone)]
struct Block {
    sigma: Vec<f64>,
    /// `dim × r_k`, orthonormal columns.
    vectors: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct Dilation {
    dim: usize,
    tau: f64,
    blocks: Vec<Block>,
    bins: Vec<Range<usize>>,
    gram: GramStructure,
    embed: ComplexMatrix,
    projection: ComplexMatrix,
    shift: ComplexMatrix,
}

/// Builds the dilation with the default null-space threshold.
pub fn build_dilation(f: &CovariantPOVM, u: &UnitaryGroup) -> Result<Dilation> {
    build_dilation_with_threshold(f, u, GRAM_THRESHOLD)
}

pub fn build_dilation_with_threshold(f: &CovariantPOVM, u: &UnitaryGroup, threshold: f64) -> Result<Dilation> {
    let dim = f.dim();
    if u.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.dim(),
        });
    }
    let effects: Vec<ComplexMatrix> = par::map_range(f.n_bins(), |k| f.effect(k));
    if let Some(bad) = effects.iter().find(|e| !e.is_hermitian()) {
        return Err(Error::NotHermitian {
            asymmetry: bad.asymmetry(),
        });
    }
    let spectra = par::map_slice(&effects, hermitian_eigh)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut min_eigenvalue = f64::INFINITY;
    let mut max_eigenvalue: f64 = 0.0;
    for (bin, s) in spectra.iter().enumerate() {
        let lo = s.min().unwrap_or(0.0);
        if lo < INDEFINITE_LIMIT {
            return Err(Error::IndefiniteGram { bin, eigenvalue: lo });
        }
        min_eigenvalue = min_eigenvalue.min(lo);
        max_eigenvalue = max_eigenvalue.max(s.max().unwrap_or(0.0));
    }
    let cutoff = threshold * max_eigenvalue;

    let mut blocks = Vec::with_capacity(spectra.len());
    let mut bins = Vec::with_capacity(spectra.len());
    let mut kept_eigenvalues = Vec::new();
    let mut discarded_count = 0;
    for s in spectra {
        let vecs = s.eigenvectors.expect("eigh returns vectors");
        let keep: Vec<usize> = (0..dim).filter(|&a| s.eigenvalues[a] > cutoff).collect();
        discarded_count += dim - keep.len();
        let sigma: Vec<f64> = keep.iter().map(|&a| s.eigenvalues[a]).collect();
        let vectors = ComplexMatrix::from_fn(dim, keep.len(), |i, c| vecs[(i, keep[c])]);
        let start = kept_eigenvalues.len();
        kept_eigenvalues.extend_from_slice(&sigma);
        bins.push(start..kept_eigenvalues.len());
        blocks.push(Block { sigma, vectors });
    }
    let rank = kept_eigenvalues.len();

    let mut embed = ComplexMatrix::zeros(rank, dim);
    for (block, range) in blocks.iter().zip(&bins) {
        for (c, a) in range.clone().enumerate() {
            let root = block.sigma[c].sqrt();
            for i in 0..dim {
                embed[(a, i)] = root * block.vectors[(i, c)].conj();
            }
        }
    }

    // P applied to each quotient basis vector u_b/√σ_b of bin k
    let mut projection = ComplexMatrix::zeros(rank, rank);
    for ((block, range), effect) in blocks.iter().zip(&bins).zip(&effects) {
        for (c, b) in range.clone().enumerate() {
            let basis = block.vectors.column(c);
            let scale = 1.0 / block.sigma[c].sqrt();
            let value: Vec<Complex64> = effect.mul_vec(&basis).iter().map(|z| z * scale).collect();
            let image = embed.mul_vec(&value);
            for (a, z) in image.into_iter().enumerate() {
                projection[(a, b)] = z;
            }
        }
    }
    let projection = projection
        .into_hermitian()
        .expect("embed·embed† is Hermitian by construction");

    let step = u.phases(f.lattice().tau());
    let n = blocks.len();
    let mut shift = ComplexMatrix::zeros(rank, rank);
    for k in 0..n {
        let (from, to) = (&blocks[k], &blocks[(k + 1) % n]);
        let (cols, rows) = (bins[k].clone(), bins[(k + 1) % n].clone());
        for (ca, a) in cols.enumerate() {
            let moved: Vec<Complex64> = (0..dim).map(|i| step[i] * from.vectors[(i, ca)]).collect();
            for (cb, b) in rows.clone().enumerate() {
                let overlap: Complex64 = (0..dim).map(|i| to.vectors[(i, cb)].conj() * moved[i]).sum();
                shift[(b, a)] = overlap * (to.sigma[cb] / from.sigma[ca]).sqrt();
            }
        }
    }

    Ok(Dilation {
        dim,
        tau: f.lattice().tau(),
        blocks,
        bins,
        gram: GramStructure {
            kept_eigenvalues,
            discarded_count,
            min_eigenvalue,
            threshold,
        },
        embed,
        projection,
        shift,
    })
}

impl Dilation {
    /// Dimension of the quotient space.
    pub fn rank(&self) -> usize {
        self.gram.kept_eigenvalues.len()
    }

    pub fn n_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn gram(&self) -> &GramStructure {
        &self.gram
    }

    /// Quotient coordinates belonging to bin `k`.
    pub fn bin_range(&self, k: usize) -> Range<usize> {
        self.bins[k].clone()
    }

    /// `P`.
    pub fn projection(&self) -> &ComplexMatrix {
        &self.projection
    }

    /// `V(τ)`.
    pub fn shift(&self) -> &ComplexMatrix {
        &self.shift
    }

    /// The isometry `H → quotient`.
    pub fn embedding(&self) -> &ComplexMatrix {
        &self.embed
    }

    /// Isometry from the quotient into raw bin-major coordinates
    /// `(k·dim + i)`, sending each basis vector to its unit eigenvector.
    pub fn basis_map(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n_bins() * self.dim, self.rank());
        for (k, (block, range)) in self.blocks.iter().zip(&self.bins).enumerate() {
            for (c, a) in range.clone().enumerate() {
                for i in 0..self.dim {
                    out[(k * self.dim + i, a)] = block.vectors[(i, c)];
                }
            }
        }
        out
    }

    /// `E(B)` as a diagonal 0/1 matrix.
    pub fn sharp_measure(&self, bins: &[usize]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rank(), self.rank());
        for &k in bins {
            for a in self.bin_range(k) {
                out[(a, a)] = Complex64::new(1.0, 0.0);
            }
        }
        out.into_hermitian().expect("diagonal")
    }

    pub fn embed(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.embed.mul_vec(psi)
    }

    /// `(embed ψ, E(B) embed ψ)`.
    pub fn sharp_probability(&self, psi: &[Complex64], bins: &[usize]) -> f64 {
        let phi = self.embed(psi);
        bins.iter()
            .flat_map(|&k| self.bin_range(k))
            .map(|a| phi[a].norm_sqr())
            .sum()
    }

    /// Probability of every bin for the embedded state.
    pub fn sharp_distribution(&self, psi: &[Complex64]) -> Vec<f64> {
        let phi = self.embed(psi);
        self.bins
            .iter()
            .map(|r| phi[r.clone()].iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// `‖embed†·embed − 1‖_max`.
    pub fn isometry_defect(&self) -> f64 {
        self.embed.adjoint().matmul(&self.embed).distance_from_identity()
    }

    /// `max(‖P² − P‖, ‖P† − P‖)`.
    pub fn projection_defect(&self) -> f64 {
        self.projection
            .idempotency_defect()
            .max(self.projection.distance(&self.projection.adjoint()))
    }

    /// `‖V†V − 1‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        self.shift.adjoint().matmul(&self.shift).distance_from_identity()
    }

    /// `‖Vⁿ − 1‖_max` with `n` the number of bins.
    pub fn periodicity_defect(&self) -> f64 {
        let mut acc = ComplexMatrix::identity(self.rank());
        for _ in 0..self.n_bins() {
            acc = self.shift.matmul(&acc);
        }
        acc.distance_from_identity()
    }
}

/// `‖P·E(B)·P − embed·F(B)·embed†·P‖_max`.
pub fn check_compression(d: &Dilation, f: &CovariantPOVM, bins: &[usize]) -> f64 {
    let p = d.projection();
    let lhs = p.matmul(&d.sharp_measure(bins)).matmul(p);
    let rhs = d
        .embedding()
        .matmul(&f.measure(bins))
        .matmul(&d.embedding().adjoint())
        .matmul(p);
    lhs.distance(&rhs)
}

/// `max_k ‖V·E_k·V† − E_{k+1}‖_max`.
pub fn check_imprimitivity(d: &Dilation) -> f64 {
    let v = d.shift();
    let vt = v.adjoint();
    let n = d.n_bins();
    par::max_range(n, |k| {
        v.matmul(&d.sharp_measure(&[k]))
            .matmul(&vt)
            .distance(&d.sharp_measure(&[(k + 1) % n]))
    })
}

/// `‖V·embed − embed·U(τ)‖_max`.
pub fn check_restriction(d: &Dilation, u: &UnitaryGroup) -> f64 {
    d.shift()
        .matmul(d.embedding())
        .distance(&d.embedding().matmul(&u.matrix(d.tau())))
}

/// Worst `|(ψ, F(B)ψ) − (embed ψ, E(B) embed ψ)|` over single bins and the
/// given bin sets.
pub fn statistics_defect(d: &Dilation, f: &CovariantPOVM, psi: &StateVector, sets: &[Vec<usize>]) -> f64 {
    let amps = psi.amplitudes();
    let sharp = d.sharp_distribution(amps);
    let singles = par::max_range(f.n_bins(), |k| (f.expectation(k, amps) - sharp[k]).abs());
    let unions = par::max_range(sets.len(), |s| {
        let fb: f64 = sets[s].iter().map(|&k| f.expectation(k, amps)).sum();
        (fb - d.sharp_probability(amps, &sets[s])).abs()
    });
    singles.max(unions)
}

/// Random subsets of `0..n`, each bin included with probability 1/2.
pub fn random_bin_sets(n: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).filter(|_| rng.random_bool(0.5)).collect())
        .collect()
}

/// All residuals of one dilation.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    pub rank: usize,
    pub discarded_count: usize,
    pub compression: f64,
    pub imprimitivity: f64,
    pub restriction: f64,
    pub projection: f64,
    pub unitarity: f64,
    pub periodicity: f64,
    pub isometry: f64,
    pub statistics: f64,
    pub tolerance: f64,
}

impl DilationReport {
    pub fn passed(&self) -> bool {
        let t = self.tolerance;
        // Vⁿ accumulates n products of rounding
        [
            self.compression,
            self.imprimitivity,
            self.restriction,
            self.projection,
            self.unitarity,
            self.isometry,
        ]
        .iter()
        .all(|&r| r <= t)
            && self.periodicity <= 100.0 * t
            && self.statistics <= 10.0 * t
    }

    pub fn record(&self) -> Record {
        Record::new("dilation")
            .int("rank", self.rank)
            .int("discarded", self.discarded_count)
            .real("compression_residual", self.compression)
            .real("imprimitivity_residual", self.imprimitivity)
            .real("restriction_residual", self.restriction)
            .real("projection_defect", self.projection)
            .real("unitarity_defect", self.unitarity)
            .real("periodicity_defect", self.periodicity)
            .real("isometry_defect", self.isometry)
            .real("statistics_defect", self.statistics)
            .real("tolerance", self.tolerance)
            .flag("pass", self.passed())
    }
}

/// Builds the dilation and runs every check, with compression tested on
/// `sets` random bin sets and statistics on a seeded random state.
pub fn dilation_report(f: &CovariantPOVM, u: &UnitaryGroup, sets: usize, seed: u64) -> Result<DilationReport> {
    let d = build_dilation(f, u)?;
    let bin_sets = random_bin_sets(f.n_bins(), sets, seed);
    let compression = par::max_range(bin_sets.len(), |s| check_compression(&d, f, &bin_sets[s]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let psi = StateVector::normalized(
        (0..f.dim())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )?;
    Ok(DilationReport {
        rank: d.rank(),
        discarded_count: d.gram().discarded_count,
        compression,
        imprimitivity: check_imprimitivity(&d),
        restriction: check_restriction(&d, u),
        projection: d.projection_defect(),
        unitarity: d.unitarity_defect(),
        periodicity: d.periodicity_defect(),
        isometry: d.isometry_defect(),
        statistics: statistics_defect(&d, f, &psi, &bin_sets),
        tolerance: 1e-10,
    })
}
