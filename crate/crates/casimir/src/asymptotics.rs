//! Closed-form and series limits of the thermal Casimir force.
//!
//! Notation: `t = T_eff/T` with `k_B T_eff = ħc/(2a)`, `δ₀ = c/ω_p`,
//! `F_ss⁰ = −π²ħc/(240a⁴)` and `F_sl⁰ = −π³ħcR/(360a³)`.
//!
//! The plasma-model series are first order in `δ₀/a` and exact in `t`. Their
//! hyperbolic terms are evaluated through `q = e^{−2πtl}`, e.g.
//! `cosh x/sinh³ x = 4q(1+q)/(1−q)³`, so nothing overflows at low temperature.
//! Sums whose terms fall off only as a power of `l` are split off and added in
//! closed form with ζ(3) and ζ(4).

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::constants::{C, HBAR_C, K_B, ZETA3, ZETA4};
use crate::error::{Error, Result};
use crate::lifshitz::{Geometry, ThermalState};
use crate::quadrature::{integrate_semi_infinite_sqrt, sum_until_converged, QuadratureSpec, SeriesSpec};

/// Below this `t` a low-temperature expansion is no longer reliable.
pub const LOW_T_MIN_T: f64 = 5.0;
/// Above this `t` a high-temperature expansion is no longer reliable.
pub const HIGH_T_MAX_T: f64 = 0.5;
/// Above this `δ₀/a` a first-order conductivity expansion is flagged.
pub const MAX_DELTA0_OVER_A: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    ZeroT,
    LowT,
    HighT,
    Series,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::ZeroT => "zero-t",
            Regime::LowT => "low-t",
            Regime::HighT => "high-t",
            Regime::Series => "series",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticResult {
    /// Same unit as the corresponding force: N/m² for plates, N for sphere–plate.
    pub value: f64,
    pub regime: Regime,
    pub validity_hint: String,
    /// Conditions under which the expansion was used outside its range.
    pub warnings: Vec<String>,
}

impl AsymptoticResult {
    fn new(value: f64, regime: Regime, hint: impl Into<String>) -> Self {
        AsymptoticResult {
            value,
            regime,
            validity_hint: hint.into(),
            warnings: Vec::new(),
        }
    }

    fn warn(mut self, cond: bool, msg: impl FnOnce() -> String) -> Self {
        if cond {
            let m = msg();
            log::warn!("{m}");
            self.warnings.push(m);
        }
        self
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("separation must be positive, got {a}")));
    }
    Ok(())
}

fn check_omega_p(omega_p: f64) -> Result<f64> {
    if !(omega_p > 0.0) {
        return Err(Error::Domain(format!("omega_p must be positive, got {omega_p}")));
    }
    Ok(C / omega_p)
}

/// −π²ħc/(240a⁴), N/m².
pub fn ideal_pressure_t0(a: f64) -> f64 {
    -PI * PI * HBAR_C / (240.0 * a.powi(4))
}

/// −π³ħcR/(360a³), N.
pub fn ideal_sphere_force_t0(a: f64, radius: f64) -> f64 {
    -PI.powi(3) * HBAR_C * radius / (360.0 * a.powi(3))
}

/// −k_BTζ(3)/(4πa³), N/m².
pub fn ideal_pressure_high_t(a: f64, temperature: f64) -> f64 {
    -K_B * temperature * ZETA3 / (4.0 * PI * a.powi(3))
}

/// −k_BTRζ(3)/(4a²), N.
pub fn ideal_sphere_force_high_t(a: f64, radius: f64, temperature: f64) -> f64 {
    -K_B * temperature * radius * ZETA3 / (4.0 * a * a)
}

/// Hyperbolic functions of x = πtl through q = e^{−2x}.
#[derive(Clone, Copy)]
struct Hyp {
    q: f64,
    /// 1 − q
    om: f64,
}

impl Hyp {
    fn new(x: f64) -> Self {
        Hyp {
            q: (-2.0 * x).exp(),
            om: -(-2.0 * x).exp_m1(),
        }
    }
    /// coth x − 1
    fn coth_m1(self) -> f64 {
        2.0 * self.q / self.om
    }
    /// 1/sinh² x
    fn csch2(self) -> f64 {
        4.0 * self.q / (self.om * self.om)
    }
    /// cosh x/sinh³ x, equal to coth x/sinh² x
    fn cosh_sinh3(self) -> f64 {
        4.0 * self.q * (1.0 + self.q) / self.om.powi(3)
    }
    /// (2cosh² x + 1)/sinh⁴ x
    fn quartic(self) -> f64 {
        let q = self.q;
        (8.0 * q * (1.0 + q) * (1.0 + q) + 16.0 * q * q) / self.om.powi(4)
    }
}

fn series(baseline: f64, spec: &SeriesSpec, term: impl Fn(f64) -> f64) -> Result<f64> {
    let r = sum_until_converged(1, baseline, spec, |l| Ok(term(l as f64)))?;
    Ok(baseline + r.value)
}

/// Σ_l [1/(tl)⁴ − (π³/(tl)) cosh(πtl)/sinh³(πtl)]
fn plate_thermal_sum(t: f64, spec: &SeriesSpec) -> Result<f64> {
    series(ZETA4 / t.powi(4), spec, |l| {
        let tl = t * l;
        -PI.powi(3) / tl * Hyp::new(PI * tl).cosh_sinh3()
    })
}

/// Σ_l [(2cosh²+1)/sinh⁴ − 2cosh/(πtl sinh³) − 1/(2π²(tl)² sinh²) − coth/(2π³(tl)³)]
fn plate_conductivity_sum(t: f64, spec: &SeriesSpec) -> Result<f64> {
    series(-ZETA3 / (2.0 * PI.powi(3) * t.powi(3)), spec, |l| {
        let tl = t * l;
        let h = Hyp::new(PI * tl);
        h.quartic()
            - 2.0 * h.cosh_sinh3() / (PI * tl)
            - h.csch2() / (2.0 * PI * PI * tl * tl)
            - h.coth_m1() / (2.0 * PI.powi(3) * tl.powi(3))
    })
}

/// Σ_l [coth/(tl)³ + π/((tl)² sinh²)]
fn sphere_thermal_sum(t: f64, spec: &SeriesSpec) -> Result<f64> {
    series(ZETA3 / t.powi(3), spec, |l| {
        let tl = t * l;
        let h = Hyp::new(PI * tl);
        h.coth_m1() / tl.powi(3) + PI * h.csch2() / (tl * tl)
    })
}

/// Σ_l [π coth/(2(tl)³) − 2/(tl)⁴ + π³ coth/(tl sinh²) + π²/((tl)² sinh²)]
fn sphere_conductivity_sum(t: f64, spec: &SeriesSpec) -> Result<f64> {
    series(PI * ZETA3 / (2.0 * t.powi(3)) - 2.0 * ZETA4 / t.powi(4), spec, |l| {
        let tl = t * l;
        let h = Hyp::new(PI * tl);
        PI * h.coth_m1() / (2.0 * tl.powi(3)) + PI.powi(3) * h.cosh_sinh3() / tl + PI * PI * h.csch2() / (tl * tl)
    })
}

/// Plate–plate pressure for the plasma model, first order in δ₀/a and exact in T.
/// `omega_p = ∞` gives the ideal-metal series.
pub fn plasma_series_ss(a: f64, temperature: f64, omega_p: f64) -> Result<AsymptoticResult> {
    check_a(a)?;
    let d = check_omega_p(omega_p)? / a;
    let spec = SeriesSpec::default();
    let mut bracket = 1.0 - 16.0 / 3.0 * d;
    if temperature > 0.0 {
        let t = ThermalState::new(temperature, a)?.t;
        bracket += 30.0 / PI.powi(4) * plate_thermal_sum(t, &spec)? - 60.0 * d * plate_conductivity_sum(t, &spec)?;
    } else if temperature < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    Ok(
        AsymptoticResult::new(ideal_pressure_t0(a) * bracket, Regime::Series, "δ₀/a ≪ 1, any T")
            .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")),
    )
}

/// Sphere–plate force for the plasma model, first order in δ₀/a and exact in T.
pub fn plasma_series_sl(a: f64, temperature: f64, omega_p: f64, radius: f64) -> Result<AsymptoticResult> {
    check_a(a)?;
    let d = check_omega_p(omega_p)? / a;
    let spec = SeriesSpec::default();
    let mut bracket = 1.0 - 4.0 * d;
    if temperature > 0.0 {
        let t = ThermalState::new(temperature, a)?.t;
        bracket += 45.0 / PI.powi(3) * sphere_thermal_sum(t, &spec)? - 1.0 / t.powi(4)
            + 180.0 / PI.powi(4) * d * sphere_conductivity_sum(t, &spec)?;
    } else if temperature < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    Ok(AsymptoticResult::new(
        ideal_sphere_force_t0(a, radius) * bracket,
        Regime::Series,
        "δ₀/a ≪ 1, any T",
    )
    .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")))
}

/// Ideal-metal force: closed form at T = 0, full thermal series otherwise.
pub fn ideal_force(geometry: &Geometry, temperature: f64) -> Result<AsymptoticResult> {
    geometry.validate()?;
    let a = geometry.a();
    if temperature == 0.0 {
        let value = match *geometry {
            Geometry::PlatePlate { .. } => ideal_pressure_t0(a),
            Geometry::SpherePlate { radius, .. } => ideal_sphere_force_t0(a, radius),
        };
        return Ok(AsymptoticResult::new(value, Regime::ZeroT, "exact"));
    }
    let mut r = match *geometry {
        Geometry::PlatePlate { .. } => plasma_series_ss(a, temperature, f64::INFINITY)?,
        Geometry::SpherePlate { radius, .. } => plasma_series_sl(a, temperature, f64::INFINITY, radius)?,
    };
    r.validity_hint = "exact for the ideal metal".into();
    Ok(r)
}

/// Ideal-metal force at high temperature, where only the zero-frequency term survives.
pub fn ideal_force_high_t(geometry: &Geometry, temperature: f64) -> Result<AsymptoticResult> {
    geometry.validate()?;
    let a = geometry.a();
    let t = ThermalState::new(temperature, a)?.t;
    let value = match *geometry {
        Geometry::PlatePlate { .. } => ideal_pressure_high_t(a, temperature),
        Geometry::SpherePlate { radius, .. } => ideal_sphere_force_high_t(a, radius, temperature),
    };
    Ok(AsymptoticResult::new(value, Regime::HighT, "T ≫ T_eff")
        .warn(t >= HIGH_T_MAX_T, || format!("t = T_eff/T = {t:.3} is not small")))
}

fn low_t_setup(a: f64, temperature: f64, omega_p: f64) -> Result<(f64, f64)> {
    check_a(a)?;
    let d = check_omega_p(omega_p)? / a;
    if temperature == 0.0 {
        return Ok((0.0, d));
    }
    let t = ThermalState::new(temperature, a)?.t;
    if t <= 1.0 {
        return Err(Error::Domain(format!(
            "low-temperature expansion needs t > 1, got {t:.3}"
        )));
    }
    Ok((1.0 / t, d))
}

/// Low-temperature plate–plate pressure for the plasma model.
pub fn low_t_plasma_ss(a: f64, temperature: f64, omega_p: f64) -> Result<AsymptoticResult> {
    let (x, d) = low_t_setup(a, temperature, omega_p)?;
    let bracket = 1.0 + x.powi(4) / 3.0 - 16.0 / 3.0 * d * (1.0 - 45.0 * ZETA3 / (8.0 * PI.powi(3)) * x.powi(3));
    Ok(
        AsymptoticResult::new(ideal_pressure_t0(a) * bracket, Regime::LowT, "T ≪ T_eff, δ₀/a ≪ 1")
            .warn(x > 0.0 && 1.0 / x < LOW_T_MIN_T, || {
                format!("t = T_eff/T = {:.3} is not large", 1.0 / x)
            })
            .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")),
    )
}

/// Low-temperature sphere–plate force for the plasma model.
pub fn low_t_plasma_sl(a: f64, temperature: f64, omega_p: f64, radius: f64) -> Result<AsymptoticResult> {
    let (x, d) = low_t_setup(a, temperature, omega_p)?;
    let c3 = 45.0 * ZETA3 / PI.powi(3);
    let bracket = 1.0 + c3 * x.powi(3) - x.powi(4) - 4.0 * d * (1.0 - c3 / 2.0 * x.powi(3) + x.powi(4));
    Ok(AsymptoticResult::new(
        ideal_sphere_force_t0(a, radius) * bracket,
        Regime::LowT,
        "T ≪ T_eff, δ₀/a ≪ 1",
    )
    .warn(x > 0.0 && 1.0 / x < LOW_T_MIN_T, || {
        format!("t = T_eff/T = {:.3} is not large", 1.0 / x)
    })
    .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")))
}

/// √y/(√(y+γ̃)+√y)
#[inline]
fn root_ratio(y: f64, g: f64) -> f64 {
    let sy = y.sqrt();
    sy / ((y + g).sqrt() + sy)
}

fn coeff(g: f64, kernel: impl Fn(f64) -> f64) -> Result<f64> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::Domain(format!("γ̃ must be non-negative, got {g}")));
    }
    let spec = QuadratureSpec::with_rel_tol(1e-12);
    Ok(integrate_semi_infinite_sqrt(kernel, 0.0, &spec)?.value)
}

/// I₁(γ̃) = ∫₀^∞ y²√y/(√(y+γ̃)+√y) · e^y/(e^y−1)² dy
pub fn coeff_i1(gamma_tilde: f64) -> Result<f64> {
    coeff(gamma_tilde, |y| {
        if y == 0.0 {
            return 0.0;
        }
        let e = (-y).exp();
        let om = -(-y).exp_m1();
        y * y * root_ratio(y, gamma_tilde) * e / (om * om)
    })
}

/// I₂(γ̃) = ∫₀^∞ y√y/(√(y+γ̃)+√y) · 1/(e^y−1) dy
pub fn coeff_i2(gamma_tilde: f64) -> Result<f64> {
    coeff(gamma_tilde, |y| {
        if y == 0.0 {
            return 0.0;
        }
        y * root_ratio(y, gamma_tilde) / y.exp_m1()
    })
}

fn high_t_setup(a: f64, temperature: f64, omega_p: f64, gamma: f64) -> Result<(f64, f64, f64, f64)> {
    check_a(a)?;
    let d = check_omega_p(omega_p)? / a;
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be non-negative, got {gamma}")));
    }
    let t = ThermalState::new(temperature, a)?.t;
    let g_tilde = 2.0 * a * gamma / C;
    Ok((d, gamma / omega_p, g_tilde, t))
}

/// High-temperature plate–plate pressure for the Drude model under the
/// light-cone zero-frequency rule.
pub fn high_t_drude_ss(a: f64, temperature: f64, omega_p: f64, gamma: f64) -> Result<AsymptoticResult> {
    let (d, ratio, g, t) = high_t_setup(a, temperature, omega_p, gamma)?;
    let relax = if ratio == 0.0 {
        0.0
    } else {
        ratio * coeff_i1(g)? / ZETA3
    };
    let value = ideal_pressure_high_t(a, temperature) * (1.0 - 3.0 * d - relax);
    Ok(
        AsymptoticResult::new(value, Regime::HighT, "T ≫ T_eff (a > 6 μm at 300 K)")
            .warn(t >= HIGH_T_MAX_T, || format!("t = T_eff/T = {t:.3} is not small"))
            .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")),
    )
}

/// High-temperature sphere–plate force for the Drude model under the
/// light-cone zero-frequency rule.
pub fn high_t_drude_sl(a: f64, temperature: f64, omega_p: f64, gamma: f64, radius: f64) -> Result<AsymptoticResult> {
    let (d, ratio, g, t) = high_t_setup(a, temperature, omega_p, gamma)?;
    let relax = if ratio == 0.0 {
        0.0
    } else {
        ratio * 2.0 * coeff_i2(g)? / ZETA3
    };
    let value = ideal_sphere_force_high_t(a, radius, temperature) * (1.0 - 2.0 * d - relax);
    Ok(
        AsymptoticResult::new(value, Regime::HighT, "T ≫ T_eff (a > 5 μm at 300 K)")
            .warn(t >= HIGH_T_MAX_T, || format!("t = T_eff/T = {t:.3} is not small"))
            .warn(d > MAX_DELTA0_OVER_A, || format!("δ₀/a = {d:.3} is not small")),
    )
}
