//! Dielectric permittivity on the imaginary frequency axis.
//!
//! All evaluators take the dimensionless frequency ξ̃ = 2aξ/c together with the
//! separation `a` (metres) and go through the physical frequency ξ = cξ̃/(2a),
//! so a result depends on (ξ̃, a) only through ξ.

use serde::{Deserialize, Serialize};

use crate::constants::{AL_GAMMA, AL_OMEGA_P, C, EV_TO_RAD_PER_S, MICA_EPS0, MICA_OMEGA_E};
use crate::error::{Error, Result};

/// Material response model. Frequencies are angular, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PermittivityModel {
    /// Perfect reflector; never evaluated through arithmetic.
    IdealMetal,
    /// ε = 1 + ω_p²/ξ².
    Plasma { omega_p: f64 },
    /// ε = 1 + ω_p²/(ξ(ξ+γ)).
    Drude { omega_p: f64, gamma: f64 },
    /// Static constant `eps0`, or the Mahanty–Ninham form
    /// ε = 1 + (ε₀−1)/(1 + ξ²/ω_e²) when `omega_e` is set.
    Dielectric { eps0: f64, omega_e: Option<f64> },
}

/// Permittivity value; the ideal metal is kept distinct from any finite number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Epsilon {
    Finite(f64),
    Infinite,
}

impl Epsilon {
    pub fn finite(self) -> Option<f64> {
        match self {
            Epsilon::Finite(v) => Some(v),
            Epsilon::Infinite => None,
        }
    }
}

/// Separation-scaled model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// 2aω_p/c
    pub omega_p_tilde: f64,
    /// 2aγ/c
    pub gamma_tilde: f64,
    /// Penetration depth c/ω_p in metres; independent of `a`.
    pub delta0: f64,
}

impl PermittivityModel {
    pub fn aluminium_drude() -> Self {
        PermittivityModel::Drude {
            omega_p: AL_OMEGA_P,
            gamma: AL_GAMMA,
        }
    }

    pub fn aluminium_plasma() -> Self {
        PermittivityModel::Plasma { omega_p: AL_OMEGA_P }
    }

    pub fn mica() -> Self {
        PermittivityModel::Dielectric {
            eps0: MICA_EPS0,
            omega_e: None,
        }
    }

    pub fn mica_mahanty_ninham() -> Self {
        PermittivityModel::Dielectric {
            eps0: MICA_EPS0,
            omega_e: Some(MICA_OMEGA_E),
        }
    }

    /// Built-in presets: `Al`/`Al-drude`, `Al-plasma`, `ideal`, `mica`, `mica-mn`.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "al" | "al-drude" => Some(Self::aluminium_drude()),
            "al-plasma" => Some(Self::aluminium_plasma()),
            "ideal" | "ideal-metal" => Some(PermittivityModel::IdealMetal),
            "mica" => Some(Self::mica()),
            "mica-mn" => Some(Self::mica_mahanty_ninham()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        match *self {
            PermittivityModel::IdealMetal => Ok(()),
            PermittivityModel::Plasma { omega_p } => {
                if !(omega_p > 0.0 && omega_p.is_finite()) {
                    return bad(format!("omega_p must be positive, got {omega_p}"));
                }
                Ok(())
            }
            PermittivityModel::Drude { omega_p, gamma } => {
                if !(omega_p > 0.0 && omega_p.is_finite()) {
                    return bad(format!("omega_p must be positive, got {omega_p}"));
                }
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return bad(format!("gamma must be non-negative, got {gamma}"));
                }
                Ok(())
            }
            PermittivityModel::Dielectric { eps0, omega_e } => {
                if !(eps0 > 1.0 && eps0.is_finite()) {
                    return bad(format!("eps0 must exceed 1, got {eps0}"));
                }
                if let Some(w) = omega_e {
                    if !(w > 0.0 && w.is_finite()) {
                        return bad(format!("omega_e must be positive, got {w}"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_metal(&self) -> bool {
        !matches!(self, PermittivityModel::Dielectric { .. })
    }

    /// Short label used in tables and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            PermittivityModel::IdealMetal => "ideal",
            PermittivityModel::Plasma { .. } => "plasma",
            PermittivityModel::Drude { .. } => "drude",
            PermittivityModel::Dielectric { omega_e: None, .. } => "dielectric",
            PermittivityModel::Dielectric { omega_e: Some(_), .. } => "dielectric-mn",
        }
    }

    /// Plasma-type parameters scaled by the separation. `None` for dielectrics and
    /// the ideal metal.
    pub fn dimensionless(&self, a: f64) -> Option<DimensionlessParams> {
        let (omega_p, gamma) = match *self {
            PermittivityModel::Plasma { omega_p } => (omega_p, 0.0),
            PermittivityModel::Drude { omega_p, gamma } => (omega_p, gamma),
            _ => return None,
        };
        Some(DimensionlessParams {
            omega_p_tilde: 2.0 * a * omega_p / C,
            gamma_tilde: 2.0 * a * gamma / C,
            delta0: C / omega_p,
        })
    }

    /// ε(iξ̃) for the separation `a`.
    pub fn eval_epsilon(&self, xi_tilde: f64, a: f64) -> Result<Epsilon> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("separation must be positive, got {a}")));
        }
        if xi_tilde < 0.0 || xi_tilde.is_nan() {
            return Err(Error::Domain(format!(
                "imaginary frequency must be non-negative, got {xi_tilde}"
            )));
        }
        match self {
            PermittivityModel::IdealMetal => Ok(Epsilon::Infinite),
            PermittivityModel::Plasma { .. } | PermittivityModel::Drude { .. } if xi_tilde == 0.0 => {
                Err(Error::Domain(
                    "metal permittivity at zero frequency is owned by the zero-frequency \
                     prescription, not the evaluator"
                        .into(),
                ))
            }
            _ => Ok(Epsilon::Finite(1.0 + self.susceptibility(xi_tilde, a))),
        }
    }

    /// ε − 1 at ξ̃ without validation. Infinite for the ideal metal and for metals at ξ̃ = 0.
    pub(crate) fn susceptibility(&self, xi_tilde: f64, a: f64) -> f64 {
        let xi = C * xi_tilde / (2.0 * a);
        match *self {
            PermittivityModel::IdealMetal => f64::INFINITY,
            PermittivityModel::Plasma { omega_p } => omega_p * omega_p / (xi * xi),
            PermittivityModel::Drude { omega_p, gamma } => omega_p * omega_p / (xi * (xi + gamma)),
            PermittivityModel::Dielectric { eps0, omega_e: None } => eps0 - 1.0,
            PermittivityModel::Dielectric {
                eps0,
                omega_e: Some(we),
            } => (eps0 - 1.0) / (1.0 + (xi / we) * (xi / we)),
        }
    }

    /// (ε − 1)ξ̃², finite down to ξ̃ = 0 where it takes its limiting value
    /// (ω̃_p² for plasma, 0 for Drude with γ > 0, 0 for dielectrics).
    pub(crate) fn susceptibility_xi_sq(&self, xi_tilde: f64, a: f64) -> f64 {
        match *self {
            PermittivityModel::IdealMetal => f64::INFINITY,
            PermittivityModel::Plasma { omega_p } => {
                let wp = 2.0 * a * omega_p / C;
                wp * wp
            }
            PermittivityModel::Drude { omega_p, gamma } => {
                let wp = 2.0 * a * omega_p / C;
                let g = 2.0 * a * gamma / C;
                if g == 0.0 {
                    wp * wp
                } else {
                    wp * wp * xi_tilde / (xi_tilde + g)
                }
            }
            PermittivityModel::Dielectric { .. } => self.susceptibility(xi_tilde, a) * xi_tilde * xi_tilde,
        }
    }
}

/// Material block of a TOML configuration.
///
/// ```toml
/// [material]
/// kind = "drude"
/// omega_p_ev = 12.5
/// gamma_ev = 0.063
/// ```
///
/// Frequencies may be given in eV (`*_ev`, converted with e/ħ) or rad/s. A `preset`
/// key selects a built-in material instead.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_p_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_e_ev: Option<f64>,
}

impl MaterialSpec {
    pub fn from_preset(name: &str) -> Self {
        MaterialSpec {
            preset: Some(name.to_string()),
            ..Default::default()
        }
    }

    pub fn to_model(&self) -> Result<PermittivityModel> {
        if let Some(name) = &self.preset {
            if self.kind.is_some() {
                return Err(Error::Config(
                    "material: give either `preset` or `kind`, not both".into(),
                ));
            }
            return PermittivityModel::preset(name)
                .ok_or_else(|| Error::Config(format!("unknown material preset `{name}`")));
        }
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::Config("material: missing `kind` or `preset`".into()))?;
        let freq = |rad: Option<f64>, ev: Option<f64>, key: &str| -> Result<Option<f64>> {
            match (rad, ev) {
                (Some(_), Some(_)) => Err(Error::Config(format!(
                    "material: give `{key}` in rad/s or eV, not both"
                ))),
                (Some(v), None) => Ok(Some(v)),
                (None, Some(e)) => Ok(Some(e * EV_TO_RAD_PER_S)),
                (None, None) => Ok(None),
            }
        };
        let omega_p = freq(self.omega_p, self.omega_p_ev, "omega_p")?;
        let gamma = freq(self.gamma, self.gamma_ev, "gamma")?;
        let omega_e = freq(self.omega_e, self.omega_e_ev, "omega_e")?;
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("material kind `{kind}` requires `{key}`")))
        };
        let model = match kind.to_ascii_lowercase().as_str() {
            "ideal" | "ideal-metal" => PermittivityModel::IdealMetal,
            "plasma" => PermittivityModel::Plasma {
                omega_p: need(omega_p, "omega_p")?,
            },
            "drude" => PermittivityModel::Drude {
                omega_p: need(omega_p, "omega_p")?,
                gamma: need(gamma, "gamma")?,
            },
            "dielectric" => PermittivityModel::Dielectric {
                eps0: need(self.eps0, "eps0")?,
                omega_e,
            },
            other => return Err(Error::Config(format!("unknown material kind `{other}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::MICRON;

    fn eps(model: &PermittivityModel, xi: f64, a: f64) -> f64 {
        model.eval_epsilon(xi, a).unwrap().finite().unwrap()
    }

    #[test]
    fn plasma_at_plasma_frequency_is_two() {
        let m = PermittivityModel::aluminium_plasma();
        let a = 1.0 * MICRON;
        let wp = m.dimensionless(a).unwrap().omega_p_tilde;
        assert!((eps(&m, wp, a) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn drude_without_relaxation_is_plasma() {
        let d = PermittivityModel::Drude {
            omega_p: AL_OMEGA_P,
            gamma: 0.0,
        };
        let p = PermittivityModel::aluminium_plasma();
        for &xi in &[1e-6, 0.3, 1.0, 17.0, 1e4] {
            assert_eq!(eps(&d, xi, 2e-6), eps(&p, xi, 2e-6));
        }
    }

    #[test]
    fn aluminium_drude_at_one_micron() {
        let m = PermittivityModel::aluminium_drude();
        let a = 1.0 * MICRON;
        let p = m.dimensionless(a).unwrap();
        // 2aω_p/c and 2aγ/c recomputed independently
        assert!((p.omega_p_tilde - 126.754_356).abs() < 1e-5);
        assert!((p.gamma_tilde - 0.640_443).abs() < 1e-5);
        // 1 + 126.754356²/(1·1.640443)
        assert!((eps(&m, 1.0, a) - 9_795.102_08).abs() < 1e-4);
    }

    #[test]
    fn mica_constant() {
        let m = PermittivityModel::mica();
        for &xi in &[0.0, 0.5, 40.0] {
            assert_eq!(eps(&m, xi, 1e-6), 7.0);
        }
    }

    #[test]
    fn mahanty_ninham_tends_to_static_value() {
        let m = PermittivityModel::mica_mahanty_ninham();
        assert_eq!(eps(&m, 0.0, 1e-6), 7.0);
        let e = eps(&m, 1.0, 1e-6);
        assert!(e < 7.0 && e > 6.99);
    }

    #[test]
    fn zero_frequency_metal_is_rejected() {
        for m in [
            PermittivityModel::aluminium_drude(),
            PermittivityModel::aluminium_plasma(),
        ] {
            assert!(matches!(m.eval_epsilon(0.0, 1e-6), Err(Error::Domain(_))));
        }
        let m = PermittivityModel::mica();
        assert!(m.eval_epsilon(-1.0, 1e-6).is_err());
        assert!(m.eval_epsilon(1.0, 0.0).is_err());
    }

    #[test]
    fn ideal_metal_is_infinite_marker() {
        let e = PermittivityModel::IdealMetal.eval_epsilon(1.0, 1e-6).unwrap();
        assert_eq!(e, Epsilon::Infinite);
    }

    #[test]
    fn invalid_parameters() {
        assert!(PermittivityModel::Plasma { omega_p: 0.0 }.validate().is_err());
        assert!(PermittivityModel::Drude {
            omega_p: 1e16,
            gamma: -1.0
        }
        .validate()
        .is_err());
        assert!(PermittivityModel::Dielectric {
            eps0: 1.0,
            omega_e: None
        }
        .validate()
        .is_err());
    }

    #[test]
    fn drude_converges_to_plasma_as_gamma_vanishes() {
        let a = 1.0 * MICRON;
        let p = PermittivityModel::aluminium_plasma();
        let wp = p.dimensionless(a).unwrap().omega_p_tilde;
        let xi0 = 0.1;
        for &gt in &[1e-3, 1e-6] {
            let gamma = gt * C / (2.0 * a);
            let d = PermittivityModel::Drude {
                omega_p: AL_OMEGA_P,
                gamma,
            };
            let bound = gt * wp * wp / (xi0 * xi0 * xi0);
            let sup = (0..400)
                .map(|k| xi0 * 10f64.powf(k as f64 * 0.02))
                .map(|xi| (eps(&d, xi, a) - eps(&p, xi, a)).abs())
                .fold(0.0, f64::max);
            assert!(sup <= bound, "gamma~={gt}: sup {sup} > {bound}");
        }
    }

    #[test]
    fn material_spec_from_ev() {
        let spec: MaterialSpec = toml::from_str("kind = \"drude\"\nomega_p_ev = 12.5\ngamma_ev = 0.063\n").unwrap();
        match spec.to_model().unwrap() {
            PermittivityModel::Drude { omega_p, gamma } => {
                assert!((omega_p / (12.5 * EV_TO_RAD_PER_S) - 1.0).abs() < 1e-15);
                assert!((gamma / (0.063 * EV_TO_RAD_PER_S) - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            MaterialSpec::from_preset("Al").to_model().unwrap(),
            PermittivityModel::aluminium_drude()
        );
        assert!(MaterialSpec::from_preset("unobtainium").to_model().is_err());
        let missing: MaterialSpec = toml::from_str("kind = \"plasma\"").unwrap();
        assert!(missing.to_model().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn metals_decrease_monotonically(x in 1e-4f64..1e3, f in 1.0001f64..10.0, ai in 0usize..3) {
                let a = [0.1e-6, 1e-6, 10e-6][ai];
                for m in [PermittivityModel::aluminium_drude(), PermittivityModel::aluminium_plasma()] {
                    let lo = eps(&m, x, a);
                    let hi = eps(&m, x * f, a);
                    prop_assert!(hi < lo);
                    prop_assert!(hi >= 1.0);
                }
            }

            #[test]
            fn depends_only_on_physical_frequency(x in 1e-4f64..1e3, a in 1e-8f64..1e-4) {
                for m in [
                    PermittivityModel::aluminium_drude(),
                    PermittivityModel::aluminium_plasma(),
                    PermittivityModel::mica_mahanty_ninham(),
                ] {
                    prop_assert_eq!(eps(&m, x, a), eps(&m, 2.0 * x, 2.0 * a));
                }
            }
        }

        #[test]
        fn tends_to_one_at_high_frequency() {
            for m in [
                PermittivityModel::aluminium_drude(),
                PermittivityModel::aluminium_plasma(),
            ] {
                assert!(eps(&m, 1e9, 1e-6) - 1.0 < 1e-10);
            }
        }
    }
}
