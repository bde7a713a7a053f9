use crate::model::{CovariantPOVM, StateVector, UnitaryGroup};
use crate::{par, Error, Result};

/// Negative probabilities above this are rounding noise.
pub const CLIP_TOLERANCE: f64 = 1e-12;
/// Mass drift repaired by renormalization.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-10;
/// Mass drift beyond this signals a state that does not belong to the POVM.
pub const MASS_TOLERANCE: f64 = 1e-8;

/// The occurrence-time distribution `p_k = (ψ, F_k ψ)` on the bin centres.
#[derive(Debug, Clone, PartialEq)]
pub struct OccurrenceDistribution {
    pub probabilities: Vec<f64>,
    pub centers: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

impl OccurrenceDistribution {
    /// Distribution from raw bin probabilities: negatives down to
    /// `−1e-12` are clipped, a drift of at most `1e-10` is renormalized, and a
    /// drift beyond `1e-8` is rejected.
    pub fn from_probabilities(mut probabilities: Vec<f64>, centers: Vec<f64>) -> Result<Self> {
        if probabilities.len() != centers.len() {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                found: probabilities.len(),
            });
        }
        for (bin, p) in probabilities.iter_mut().enumerate() {
            if *p < -CLIP_TOLERANCE || p.is_nan() {
                return Err(Error::NegativeProbability { bin, value: *p });
            }
            *p = p.max(0.0);
        }
        let total: f64 = probabilities.iter().sum();
        let drift = (total - 1.0).abs();
        if !(drift <= MASS_TOLERANCE) {
            return Err(Error::ProbabilityMass { total });
        }
        if drift <= RENORMALIZE_TOLERANCE {
            probabilities.iter_mut().for_each(|p| *p /= total);
        }
        let mass: f64 = probabilities.iter().sum();
        let mean = probabilities.iter().zip(&centers).map(|(p, t)| p * t).sum::<f64>() / mass;
        let variance = probabilities
            .iter()
            .zip(&centers)
            .map(|(p, t)| p * (t - mean).powi(2))
            .sum::<f64>()
            / mass;
        Ok(OccurrenceDistribution {
            probabilities,
            centers,
            mean,
            variance,
        })
    }
}

/// `p_k = (ψ, F(Δ_k)ψ)` for every bin.
pub fn occurrence_distribution(f: &CovariantPOVM, psi: &StateVector) -> Result<OccurrenceDistribution> {
    if psi.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: psi.len(),
        });
    }
    let amps = psi.amplitudes();
    let probabilities = par::map_range(f.n_bins(), |k| f.expectation(k, amps));
    OccurrenceDistribution::from_probabilities(probabilities, f.lattice().centers())
}

/// `Δ(T_F)`, the standard deviation of the occurrence distribution.
pub fn time_uncertainty(mu: &OccurrenceDistribution) -> f64 {
    mu.variance.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMoments {
    /// `⟨H⟩`.
    pub mean: f64,
    /// `⟨H²⟩ = ‖Hψ‖²`.
    pub second: f64,
    /// `Δ(H)`.
    pub spread: f64,
}

pub fn energy_moments(psi: &StateVector, u: &UnitaryGroup) -> EnergyMoments {
    energy_moments_shifted(psi, u, 0.0)
}

/// Moments of `H − shift`.
pub fn energy_moments_shifted(psi: &StateVector, u: &UnitaryGroup, shift: f64) -> EnergyMoments {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (e, a) in u.generator().iter().zip(psi.amplitudes()) {
        let (e, w) = (e - shift, a.norm_sqr());
        mean += e * w;
        second += e * e * w;
    }
    // variance from centred moments avoids cancellation for large offsets
    let variance: f64 = u
        .generator()
        .iter()
        .zip(psi.amplitudes())
        .map(|(e, a)| (e - shift - mean).powi(2) * a.norm_sqr())
        .sum();
    EnergyMoments {
        mean,
        second,
        spread: variance.max(0.0).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_halfline_povm, build_sharp_time_povm, gaussian_state, EnergyGrid};
    use num_complex::Complex64;

    fn full(n: usize) -> EnergyGrid {
        EnergyGrid::full_line(n, EnergyGrid::balanced_spacing(n)).unwrap()
    }

    #[test]
    fn fourier_mode_gives_uniform_distribution() {
        let g = full(32);
        let f = build_sharp_time_povm(&g).unwrap();
        let mu = occurrence_distribution(&f, &StateVector::basis(32, 5)).unwrap();
        for p in &mu.probabilities {
            assert!((p - 1.0 / 32.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_time_variance() {
        let g = full(512);
        let f = build_sharp_time_povm(&g).unwrap();
        for width in [0.5, 0.7, 1.0] {
            let psi = gaussian_state(&g, 0.0, width).unwrap().state;
            let mu = occurrence_distribution(&f, &psi).unwrap();
            assert!(mu.mean.abs() < 1e-10);
            let sigma = 1.0 / (2.0 * width);
            assert!(
                (time_uncertainty(&mu) - sigma).abs() < 1e-6,
                "{}",
                time_uncertainty(&mu)
            );
        }
    }

    #[test]
    fn mass_is_one_for_halfline() {
        let g = full(64);
        let f = build_halfline_povm(&g, 32).unwrap();
        let psi = crate::model::random_smooth_state(f.grid(), 1);
        let mu = occurrence_distribution(&f, &psi).unwrap();
        assert!((mu.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn simple_distributions() {
        let point = OccurrenceDistribution::from_probabilities(vec![0.0, 1.0, 0.0], vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(time_uncertainty(&point), 0.0);
        let pair = OccurrenceDistribution::from_probabilities(vec![0.5, 0.0, 0.5], vec![-2.5, 0.0, 2.5]).unwrap();
        assert!((time_uncertainty(&pair) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn probability_defects() {
        let c = vec![0.0, 1.0];
        assert!(OccurrenceDistribution::from_probabilities(vec![1.0 + 1e-13, -1e-13], c.clone()).is_ok());
        assert!(matches!(
            OccurrenceDistribution::from_probabilities(vec![1.1, -1e-6], c.clone()),
            Err(Error::NegativeProbability { bin: 1, .. })
        ));
        assert!(matches!(
            OccurrenceDistribution::from_probabilities(vec![0.9, 0.0], c),
            Err(Error::ProbabilityMass { .. })
        ));
    }

    #[test]
    fn two_point_energy_moments() {
        let g = EnergyGrid::half_line(2, 1.0).unwrap();
        let s = 0.5f64.sqrt();
        let psi = StateVector::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
        let m = energy_moments(&psi, &UnitaryGroup::new(&g));
        assert!((m.mean - 0.5).abs() < 1e-15);
        assert!((m.spread - 0.5).abs() < 1e-15);
        assert!((m.second - 0.5).abs() < 1e-15);
        let eigen = energy_moments(&StateVector::basis(2, 1), &UnitaryGroup::new(&g));
        assert_eq!(eigen.spread, 0.0);
    }

    #[test]
    fn gaussian_energy_moments_match_closed_form() {
        let g = full(512);
        let psi = gaussian_state(&g, 0.8, 0.9).unwrap().state;
        let m = energy_moments(&psi, &UnitaryGroup::new(&g));
        assert!((m.mean - 0.8).abs() < 1e-8);
        assert!((m.spread - 0.9).abs() < 1e-8);
        assert!((m.second - (0.81 + 0.64)).abs() < 1e-8);
    }
}
