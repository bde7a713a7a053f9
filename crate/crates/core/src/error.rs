use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A†| = {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix dimensions do not match: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("requested {requested} eigenvalues but the matrix has only {available}")]
    TooManyEigenvalues { requested: usize, available: usize },

    #[error("`{name}` must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("Airy zero index {index} is outside the supported range 1..={max}")]
    AiryZeroIndex { index: usize, max: usize },

    #[error("energy profile is not unimodular at index {index}: |g| = {modulus:.12}")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("cutoff retains {retained} energies; at least 2 are required")]
    CutoffTooLarge { retained: usize },

    #[error("Gram matrix is indefinite in bin {bin}: eigenvalue {eigenvalue:.3e}")]
    IndefiniteGram { bin: usize, eigenvalue: f64 },

    #[error("state norm is {norm:.15}, expected 1")]
    StateNorm { norm: f64 },

    #[error("negative probability {value:.3e} in bin {bin}")]
    NegativeProbability { bin: usize, value: f64 },

    #[error("occurrence probabilities sum to {total:.15}; state and POVM are inconsistent")]
    ProbabilityMass { total: f64 },

    #[error(
        "spectrum reaches {min_energy:.6} < 0; shift the Hamiltonian by the infimum of its \
         spectrum (H - inf σ(H)·1) before checking the positive-energy bound"
    )]
    NegativeEnergies { min_energy: f64 },

    #[error("state carries {mass:.3e} probability at the grid boundary (limit 1e-8)")]
    BoundaryMass { mass: f64 },

    #[error("domain length {length} is too short; at least {required:.2} is required")]
    DomainTooShort { length: f64, required: f64 },

    #[error("scaling by {mu} undersamples the state (norm before renormalization {norm:.6})")]
    ScalingUndersampled { mu: f64, norm: f64 },

    #[error("malformed POVM document: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}
