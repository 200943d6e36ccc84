//! Reflection coefficients on the imaginary frequency axis.
//!
//! In the variables `(ξ̃, y)` with `s = √((ε−1)ξ̃² + y²)`:
//!
//! ```text
//! r₁ = (εy − s)/(εy + s)      (parallel, TM)
//! r₂ = (y − s)/(y + s)        (perpendicular, TE)
//! ```
//!
//! Downstream code needs `r²` and, for reflectivities close to one, `1 − r²` to
//! full relative precision, so both are computed from cancellation-free forms:
//! `r₂ = −(ε−1)ξ̃²/(y+s)²` and `1 − r₂² = 4ys/(y+s)²`, and likewise for `r₁`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::models::PermittivityModel;

/// Rule fixing the reflection coefficients of the zero-frequency Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prescription {
    /// Transverse zero-frequency reflectivity taken on the light cone, r₂²(y, y).
    ModifiedSdm,
    /// r₁² = 1, r₂² = 0 for metals.
    ZeroTransverse,
    /// r₁² = r₂² = 1 for metals.
    UnitReflection,
    /// The model's own ξ̃ → 0 limit. Undefined for Drude metals.
    Raw,
}

impl Prescription {
    pub const ALL: [Prescription; 4] = [
        Prescription::ModifiedSdm,
        Prescription::ZeroTransverse,
        Prescription::UnitReflection,
        Prescription::Raw,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Prescription::ModifiedSdm => "modified-sdm",
            Prescription::ZeroTransverse => "zero-transverse",
            Prescription::UnitReflection => "unit-reflection",
            Prescription::Raw => "raw",
        }
    }
}

impl fmt::Display for Prescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Prescription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "modified-sdm" | "sdm" => Ok(Prescription::ModifiedSdm),
            "zero-transverse" | "zt" => Ok(Prescription::ZeroTransverse),
            "unit-reflection" | "ur" => Ok(Prescription::UnitReflection),
            "raw" => Ok(Prescription::Raw),
            other => Err(Error::Config(format!(
                "unknown prescription '{other}' (expected modified-sdm, zero-transverse, unit-reflection or raw)"
            ))),
        }
    }
}

/// Signed reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r1: f64,
    pub r2: f64,
}

/// Squared reflection coefficients together with their complements `1 − r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflectivity {
    pub r1_sq: f64,
    pub r2_sq: f64,
    /// 1 − r₁²
    pub c1: f64,
    /// 1 − r₂²
    pub c2: f64,
}

impl Reflectivity {
    pub const PERFECT: Reflectivity = Reflectivity {
        r1_sq: 1.0,
        r2_sq: 1.0,
        c1: 0.0,
        c2: 0.0,
    };

    fn from_signed(r1: f64, c1: f64, r2: f64, c2: f64) -> Self {
        Reflectivity {
            r1_sq: r1 * r1,
            r2_sq: r2 * r2,
            c1,
            c2,
        }
    }

    /// `(r², 1 − r²)` for each polarization.
    pub fn modes(&self) -> [(f64, f64); 2] {
        [(self.r1_sq, self.c1), (self.r2_sq, self.c2)]
    }
}

/// r and 1 − r² for the TE mode given `x = (ε−1)ξ̃²`.
#[inline]
fn transverse(x: f64, y: f64) -> (f64, f64) {
    let s = (x + y * y).sqrt();
    let d = (y + s) * (y + s);
    (-x / d, (4.0 * y * s / d).min(1.0))
}

/// r and 1 − r² for the TM mode given `χ = ε−1`, `x = χξ̃²` and `ξ̃²`.
#[inline]
fn parallel(chi: f64, x: f64, xi_sq: f64, y: f64) -> (f64, f64) {
    let s = (x + y * y).sqrt();
    if chi > 1.0 {
        let u = s / (1.0 + chi);
        let d = (y + u) * (y + u);
        ((y - u) / (y + u), (4.0 * y * u / d).min(1.0))
    } else {
        let eps = 1.0 + chi;
        let d = (eps * y + s) * (eps * y + s);
        (
            chi * ((eps + 1.0) * y * y - xi_sq) / d,
            (4.0 * eps * y * s / d).min(1.0),
        )
    }
}

/// Light-cone value `r = (√ε−1)/(√ε+1)` and `1 − r²`, from `χ = ε − 1`.
#[inline]
fn diagonal(chi: f64) -> (f64, f64) {
    if chi.is_infinite() {
        return (1.0, 0.0);
    }
    let se = (1.0 + chi).sqrt();
    let d = (se + 1.0) * (se + 1.0);
    (chi / d, (4.0 * se / d).min(1.0))
}

fn check_point(xi_tilde: f64, y: f64, a: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("separation must be positive, got {a}")));
    }
    if !(xi_tilde >= 0.0) || !(y >= xi_tilde) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "reflection coefficients need y ≥ ξ̃ ≥ 0, got ξ̃ = {xi_tilde}, y = {y}"
        )));
    }
    Ok(())
}

fn prescription_owned(model: &PermittivityModel, xi_tilde: f64) -> Result<()> {
    if xi_tilde == 0.0
        && matches!(
            model,
            PermittivityModel::Plasma { .. } | PermittivityModel::Drude { .. }
        )
    {
        return Err(Error::Domain(
            "ξ̃ = 0 for a metal is fixed by the zero-frequency prescription; use zero_frequency_values".into(),
        ));
    }
    Ok(())
}

/// Signed `(r₁, r₂)` at `(ξ̃, y)`.
pub fn reflection_pair(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64) -> Result<ReflectionPair> {
    check_point(xi_tilde, y, a)?;
    prescription_owned(model, xi_tilde)?;
    if let PermittivityModel::IdealMetal = model {
        return Ok(ReflectionPair { r1: 1.0, r2: -1.0 });
    }
    let chi = model.susceptibility(xi_tilde, a);
    let x = model.susceptibility_xi_sq(xi_tilde, a);
    let (r1, _) = parallel(chi, x, xi_tilde * xi_tilde, y);
    let (r2, _) = transverse(x, y);
    Ok(ReflectionPair { r1, r2 })
}

/// `r²` and `1 − r²` at `(ξ̃, y)` for ξ̃ > 0 (or any ξ̃ for dielectrics).
pub fn reflectivity(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64) -> Result<Reflectivity> {
    check_point(xi_tilde, y, a)?;
    prescription_owned(model, xi_tilde)?;
    Ok(reflectivity_unchecked(model, xi_tilde, y, a))
}

#[inline]
pub(crate) fn reflectivity_unchecked(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64) -> Reflectivity {
    if let PermittivityModel::IdealMetal = model {
        return Reflectivity::PERFECT;
    }
    let chi = model.susceptibility(xi_tilde, a);
    let x = model.susceptibility_xi_sq(xi_tilde, a);
    let (r1, c1) = parallel(chi, x, xi_tilde * xi_tilde, y);
    let (r2, c2) = transverse(x, y);
    Reflectivity::from_signed(r1, c1, r2, c2)
}

/// Light-cone reflectivity `((√ε−1)/(√ε+1))²` at ξ̃ = y, shared by both polarizations.
pub fn diagonal_reflectivity(model: &PermittivityModel, y: f64, a: f64) -> Result<(f64, f64)> {
    check_point(y, y, a)?;
    prescription_owned(model, y)?;
    if let PermittivityModel::IdealMetal = model {
        return Ok((1.0, 0.0));
    }
    let (r, c) = diagonal(model.susceptibility(y, a));
    Ok((r * r, c))
}

/// Reflectivities assigned to the zero-frequency term by `prescription`.
///
/// The ideal metal reflects perfectly under every prescription. For dielectrics
/// `Raw` and `ModifiedSdm` coincide, since r₂ vanishes at zero frequency
/// continuously; the metal-only prescriptions are rejected.
pub fn zero_frequency_values(
    model: &PermittivityModel,
    prescription: Prescription,
    y: f64,
    a: f64,
) -> Result<Reflectivity> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("zero-frequency term needs y > 0, got {y}")));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("separation must be positive, got {a}")));
    }
    Ok(match (model, prescription) {
        (PermittivityModel::IdealMetal, _) => Reflectivity::PERFECT,
        (PermittivityModel::Dielectric { .. }, Prescription::Raw | Prescription::ModifiedSdm) => {
            reflectivity_unchecked(model, 0.0, y, a)
        }
        (PermittivityModel::Dielectric { .. }, p) => {
            return Err(Error::IncompatiblePrescription {
                prescription: p.to_string(),
                model: model.label().into(),
            })
        }
        (_, Prescription::ZeroTransverse) => Reflectivity {
            r1_sq: 1.0,
            r2_sq: 0.0,
            c1: 0.0,
            c2: 1.0,
        },
        (_, Prescription::UnitReflection) => Reflectivity::PERFECT,
        (_, Prescription::ModifiedSdm) => {
            let (r, c) = diagonal(model.susceptibility(y, a));
            Reflectivity {
                r1_sq: 1.0,
                r2_sq: r * r,
                c1: 0.0,
                c2: c,
            }
        }
        (PermittivityModel::Drude { gamma, .. }, Prescription::Raw) if *gamma > 0.0 => {
            return Err(Error::AmbiguousZeroFrequency)
        }
        (_, Prescription::Raw) => {
            let (r2, c2) = transverse(model.susceptibility_xi_sq(0.0, a), y);
            Reflectivity {
                r1_sq: 1.0,
                r2_sq: r2 * r2,
                c1: 0.0,
                c2,
            }
        }
    })
}

/// r₂² along the ray ξ̃ = k·y through the origin of the (ξ̃, y) plane.
///
/// For the plasma model the result depends on `y` only as `y → 0`; for the Drude
/// model it jumps from 0 (`k = 0`) to values approaching 1 for any fixed `k > 0`.
pub fn discontinuity_probe(model: &PermittivityModel, k: f64, y: f64, a: f64) -> Result<f64> {
    if !matches!(
        model,
        PermittivityModel::Plasma { .. } | PermittivityModel::Drude { .. }
    ) {
        return Err(Error::Domain(format!(
            "the probe applies to plasma and Drude metals, not {}",
            model.label()
        )));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("slope must lie in [0, 1], got {k}")));
    }
    if !(y > 0.0 && y.is_finite()) || !(a > 0.0) {
        return Err(Error::Domain(format!(
            "probe needs y > 0 and a > 0, got y = {y}, a = {a}"
        )));
    }
    let xi = k * y;
    let (r2, _) = transverse(model.susceptibility_xi_sq(xi, a), y);
    Ok(r2 * r2)
}

/// `(r₁², r₂²)` from the physical-variable expressions
/// `r₁ = (εq − k_ε)/(εq + k_ε)`, `r₂ = (q − k_ε)/(q + k_ε)` with
/// `q² = ξ²/c² + k⊥²`, `k_ε² = εξ²/c² + k⊥²`.
///
/// `xi` is in rad/s and `k_perp` in 1/m; `xi = 0` is prescription-owned for metals.
pub fn reflectivity_kperp(model: &PermittivityModel, xi: f64, k_perp: f64, a: f64) -> Result<(f64, f64)> {
    if !(xi >= 0.0) || !(k_perp >= 0.0) {
        return Err(Error::Domain(format!("need ξ ≥ 0 and k⊥ ≥ 0, got {xi}, {k_perp}")));
    }
    let xi_tilde = 2.0 * a * xi / C;
    prescription_owned(model, xi_tilde)?;
    if let PermittivityModel::IdealMetal = model {
        return Ok((1.0, 1.0));
    }
    let eps = 1.0 + model.susceptibility(xi_tilde, a);
    let w = xi / C;
    let q = (w * w + k_perp * k_perp).sqrt();
    let k_eps = (eps * w * w + k_perp * k_perp).sqrt();
    let r1 = (eps * q - k_eps) / (eps * q + k_eps);
    let r2 = (q - k_eps) / (q + k_eps);
    Ok((r1 * r1, r2 * r2))
}
