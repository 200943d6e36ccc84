use thiserror::Error;

use crate::quadrature::QuadError;

/// Errors produced by the physics engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    /// The transverse reflection coefficient of a Drude metal has no unique value at
    /// zero frequency: r₂² = 0 when ξ = 0 is set first, r₂² = 1 when ε → ∞ is taken
    /// first. The caller must pick a prescription.
    #[error(
        "the zero-frequency term is ambiguous for a Drude metal: r2^2(0, y) = 0 if the \
         frequency is set to zero first, but r2^2 = 1 if the permittivity is sent to \
         infinity first; choose a prescription (modified-sdm, zero-transverse or \
         unit-reflection) or enable the zero-transverse override"
    )]
    AmbiguousZeroFrequency,

    #[error("prescription {prescription} does not apply to {model}")]
    IncompatiblePrescription { prescription: String, model: String },

    #[error(transparent)]
    Quadrature(#[from] QuadError),

    #[error("series did not converge within {cap} terms (last term {last_term:e}, partial sum {partial:e})")]
    SeriesCap { cap: u64, last_term: f64, partial: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True when the error comes from a numerical convergence failure rather than bad input.
    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Quadrature(QuadError::InvalidSpec(_) | QuadError::InvalidRange { .. }) => false,
            Error::Quadrature(_) | Error::SeriesCap { .. } => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
