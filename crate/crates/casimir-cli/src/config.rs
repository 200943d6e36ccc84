//! TOML run configuration with `[geometry]`, `[material]` and `[run]` sections.

use std::path::Path;

use casimir::analysis::grid;
use casimir::constants::{MICRON, ROOM_TEMPERATURE};
use casimir::models::MaterialSpec;
use casimir::reflection::Prescription;
use casimir::{Error, Geometry, LifshitzOptions, PermittivityModel, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    #[default]
    PlatePlate,
    SpherePlate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub min_um: f64,
    pub max_um: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl SweepConfig {
    /// Separations in metres.
    pub fn separations(&self) -> Result<Vec<f64>> {
        Ok(grid(self.min_um, self.max_um, self.count, self.log)?
            .into_iter()
            .map(|a| a * MICRON)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    pub a_um: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            kind: GeometryKind::PlatePlate,
            a_um: 1.0,
            radius_um: None,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub prescription: Prescription,
    pub temperature_k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            prescription: Prescription::ModifiedSdm,
            temperature_k: ROOM_TEMPERATURE,
            format: None,
            rel_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub material: MaterialSpec,
    pub run: RunSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometry: GeometryConfig::default(),
            material: MaterialSpec::from_preset("al-drude"),
            run: RunSection::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if !(g.a_um > 0.0 && g.a_um.is_finite()) {
            return Err(Error::Config(format!("geometry.a_um must be positive, got {}", g.a_um)));
        }
        match (g.kind, g.radius_um) {
            (GeometryKind::SpherePlate, None) => {
                return Err(Error::Config("sphere-plate geometry needs geometry.radius_um".into()))
            }
            (GeometryKind::SpherePlate, Some(r)) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::Config(format!("geometry.radius_um must be positive, got {r}")))
            }
            (GeometryKind::PlatePlate, Some(_)) => {
                return Err(Error::Config(
                    "geometry.radius_um is only meaningful for sphere-plate".into(),
                ))
            }
            _ => {}
        }
        if let Some(s) = &g.sweep {
            s.separations()?;
        }
        if !(self.run.temperature_k >= 0.0 && self.run.temperature_k.is_finite()) {
            return Err(Error::Config(format!(
                "run.temperature_k must be non-negative, got {}",
                self.run.temperature_k
            )));
        }
        if let Some(tol) = self.run.rel_tol {
            LifshitzOptions::with_rel_tol(tol)
                .quad
                .validate()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        self.model()?;
        Ok(())
    }

    pub fn model(&self) -> Result<PermittivityModel> {
        let m = self.material.to_model()?;
        m.validate()?;
        Ok(m)
    }

    pub fn geometry(&self) -> Geometry {
        let a = self.geometry.a_um * MICRON;
        match self.geometry.kind {
            GeometryKind::PlatePlate => Geometry::PlatePlate { a },
            GeometryKind::SpherePlate => Geometry::SpherePlate {
                a,
                radius: self.geometry.radius_um.unwrap_or(f64::NAN) * MICRON,
            },
        }
    }

    pub fn options(&self) -> LifshitzOptions {
        self.run.rel_tol.map(LifshitzOptions::with_rel_tol).unwrap_or_default()
    }
}

/// A separation argument: a single value or `lo:hi:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Span {
    Value(f64),
    Range { lo: f64, hi: f64, count: usize },
}

impl std::str::FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
        match parts.as_slice() {
            [v] => Ok(Span::Value(num(v)?)),
            [lo, hi, n] => Ok(Span::Range {
                lo: num(lo)?,
                hi: num(hi)?,
                count: n.trim().parse().map_err(|e| format!("'{n}': {e}"))?,
            }),
            _ => Err(format!("expected a number or lo:hi:count, got '{s}'")),
        }
    }
}

impl Span {
    pub fn values(&self, log: bool) -> Result<Vec<f64>> {
        match *self {
            Span::Value(v) => Ok(vec![v]),
            Span::Range { lo, hi, count } => grid(lo, hi, count, log),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let c = RunConfig::default();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
        c.validate().unwrap();
    }

    #[test]
    fn full_round_trip() {
        let text = r#"
[geometry]
kind = "sphere-plate"
a_um = 0.5
radius_um = 100.0

[geometry.sweep]
min_um = 0.1
max_um = 10.0
count = 5
log = true

[material]
kind = "drude"
omega_p_ev = 12.5
gamma_ev = 0.063

[run]
prescription = "zero-transverse"
temperature_k = 77.0
format = "json"
rel_tol = 1e-8
"#;
        let c = RunConfig::parse(text).unwrap();
        c.validate().unwrap();
        assert_eq!(RunConfig::parse(&c.to_toml().unwrap()).unwrap(), c);
        assert_eq!(c.geometry.sweep.unwrap().separations().unwrap().len(), 5);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::parse("[geometry]\nshape = 1").is_err());
        let mut c = RunConfig::default();
        c.geometry.kind = GeometryKind::SpherePlate;
        assert!(c.validate().is_err());
        c.geometry.radius_um = Some(10.0);
        c.validate().unwrap();
        c.geometry.sweep = Some(SweepConfig {
            min_um: 1.0,
            max_um: 0.5,
            count: 3,
            log: false,
        });
        assert!(c.validate().is_err());
    }

    #[test]
    fn spans() {
        assert_eq!("2".parse::<Span>().unwrap(), Span::Value(2.0));
        assert_eq!(
            "0.1:10:50".parse::<Span>().unwrap(),
            Span::Range {
                lo: 0.1,
                hi: 10.0,
                count: 50
            }
        );
        assert!("1:2".parse::<Span>().is_err());
    }
}
