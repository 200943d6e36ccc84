//! Thermal Casimir forces between real metals and dielectrics.
//!
//! The crate evaluates the Lifshitz formula at nonzero temperature for two
//! configurations, parallel plates and a large sphere above a plate (in the
//! proximity force approximation), and provides the tooling around it:
//! permittivity models, reflection coefficients, prescriptions for the
//! zero-frequency Matsubara term, closed-form asymptotics and comparison tables.
//!
//! Internally everything is expressed in the dimensionless variables
//! `ξ̃ = 2aξ/c` (imaginary frequency) and `y = 2aq` with `q² = k⊥² + ξ²/c²`,
//! so that Matsubara frequencies are `ξ̃_l = lτ` with `τ = 4πa k_BT/(ħc)`.

// NaN-rejecting guards are written as negated comparisons; tabulated nodes keep full precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod models;
pub mod quadrature;
pub mod reflection;

pub use error::{Error, Result};
pub use lifshitz::{Geometry, LifshitzOptions, Prescription, ThermalState};
pub use models::PermittivityModel;
