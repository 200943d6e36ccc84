//! Matsubara sums for the force between parallel plates and between a sphere and a plate.
//!
//! With `f_ss = r²/(e^y − r²)` and `f_sl = ln(1 − r² e^{−y})` summed over both
//! polarizations:
//!
//! ```text
//! plate–plate pressure   P = −k_BT/(16πa³) · { ∫₀^∞ y² f_ss(0, y) dy + 2 Σ_{l≥1} ∫_{ξ̃_l}^∞ y² f_ss(ξ̃_l, y) dy }
//! sphere–plate force     F =  k_BTR/(8a²)  · { ∫₀^∞ y  f_sl(0, y) dy + 2 Σ_{l≥1} ∫_{ξ̃_l}^∞ y  f_sl(ξ̃_l, y) dy }
//! plate free energy      E =  k_BT/(16πa²) · { same bracket as the sphere–plate force }
//! ```
//!
//! The zero-frequency reflectivities come from the selected [`Prescription`].
//! At `T = 0` the sum becomes an integral over ξ̃ and no prescription is needed.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, HBAR_C, K_B};
use crate::error::{Error, Result};
use crate::models::PermittivityModel;
use crate::quadrature::{
    integrate_semi_infinite, integrate_semi_infinite_sqrt, sum_until_converged, QuadratureSpec, SeriesSpec,
};
use crate::reflection::{
    reflectivity, reflectivity_kperp, reflectivity_unchecked, zero_frequency_values, Reflectivity,
};

pub use crate::reflection::Prescription;

/// Ratio a/R above which the proximity force approximation is flagged.
pub const PFA_WARN_RATIO: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    PlatePlate { a: f64 },
    SpherePlate { a: f64, radius: f64 },
}

impl Geometry {
    pub fn a(&self) -> f64 {
        match *self {
            Geometry::PlatePlate { a } | Geometry::SpherePlate { a, .. } => a,
        }
    }

    pub fn with_separation(&self, a: f64) -> Geometry {
        match *self {
            Geometry::PlatePlate { .. } => Geometry::PlatePlate { a },
            Geometry::SpherePlate { radius, .. } => Geometry::SpherePlate { a, radius },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Geometry::PlatePlate { .. } => "plate-plate",
            Geometry::SpherePlate { .. } => "sphere-plate",
        }
    }

    pub fn unit(&self) -> Unit {
        match self {
            Geometry::PlatePlate { .. } => Unit::Pascal,
            Geometry::SpherePlate { .. } => Unit::Newton,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.a();
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("separation must be positive, got {a}")));
        }
        if let Geometry::SpherePlate { radius, .. } = *self {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::Domain(format!("sphere radius must be positive, got {radius}")));
            }
            if a / radius > PFA_WARN_RATIO {
                log::warn!(
                    "a/R = {:.3} exceeds {PFA_WARN_RATIO}; the proximity force result is accurate only to order a/R",
                    a / radius
                );
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    /// N/m², plate–plate pressure.
    Pascal,
    /// N, sphere–plate force.
    Newton,
    /// J/m², plate–plate free energy per unit area.
    JoulePerSquareMetre,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Pascal => "N/m^2",
            Unit::Newton => "N",
            Unit::JoulePerSquareMetre => "J/m^2",
        })
    }
}

/// Temperature together with the derived Matsubara scale for a separation `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    /// K
    pub temperature: f64,
    /// Effective temperature ħc/(2ak_B), K.
    pub t_eff: f64,
    /// T_eff/T
    pub t: f64,
    /// 4πak_BT/(ħc), the spacing of ξ̃_l.
    pub tau: f64,
}

impl ThermalState {
    pub fn new(temperature: f64, a: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !(a > 0.0) {
            return Err(Error::Domain(format!("separation must be positive, got {a}")));
        }
        let t_eff = HBAR_C / (2.0 * a * K_B);
        let tau = 4.0 * std::f64::consts::PI * a * K_B * temperature / HBAR_C;
        Ok(ThermalState {
            temperature,
            t_eff,
            t: t_eff / temperature,
            tau,
        })
    }

    /// ξ̃_l = lτ
    pub fn xi_tilde(&self, l: u64) -> f64 {
        l as f64 * self.tau
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LifshitzOptions {
    pub quad: QuadratureSpec,
    pub series: SeriesSpec,
    /// Treat `Raw` on a Drude metal as `ZeroTransverse` instead of failing.
    pub raw_drude_as_zero_transverse: bool,
}

impl LifshitzOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        LifshitzOptions {
            quad: QuadratureSpec::with_rel_tol(rel_tol),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceResult {
    pub value: f64,
    pub unit: Unit,
    /// Contribution of the l = 0 term (the whole value at T = 0).
    pub zero_term: f64,
    /// Contributions of l = 1, 2, … in the same unit as `value`.
    #[serde(skip)]
    pub tail_terms: Vec<f64>,
    pub l_max_used: u64,
    pub est_rel_error: f64,
}

impl ForceResult {
    /// Fraction of the total carried by the l = 0 term.
    pub fn zero_term_share(&self) -> f64 {
        self.zero_term / self.value
    }
}

/// Which weighted kernel a bracket integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    /// y² f_ss
    Pressure,
    /// y f_sl
    Energy,
}

impl Kernel {
    fn for_geometry(g: &Geometry) -> Self {
        match g {
            Geometry::PlatePlate { .. } => Kernel::Pressure,
            Geometry::SpherePlate { .. } => Kernel::Energy,
        }
    }

    #[inline]
    fn eval(self, refl: &Reflectivity, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        match self {
            Kernel::Pressure => {
                let em1 = y.exp_m1();
                y * y * refl.modes().iter().map(|&(r, c)| f_ss(r, c, em1)).sum::<f64>()
            }
            Kernel::Energy => {
                let ey = (-y).exp();
                let om = -(-y).exp_m1();
                y * refl.modes().iter().map(|&(r, c)| f_sl(r, c, ey, om)).sum::<f64>()
            }
        }
    }
}

/// r²/(e^y − r²) written as r²/((e^y − 1) + (1 − r²)).
#[inline]
fn f_ss(r_sq: f64, comp: f64, em1: f64) -> f64 {
    if r_sq == 0.0 {
        0.0
    } else {
        r_sq / (em1 + comp)
    }
}

/// ln(1 − r²e^{−y}) given e^{−y} and 1 − e^{−y}.
#[inline]
fn f_sl(r_sq: f64, comp: f64, ey: f64, one_minus_ey: f64) -> f64 {
    let p = r_sq * ey;
    if p < 0.5 {
        (-p).ln_1p()
    } else {
        (comp * ey + one_minus_ey).ln()
    }
}

fn integrand_pair(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64, kernel: Kernel) -> Result<(f64, f64)> {
    let refl = reflectivity(model, xi_tilde, y, a)?;
    let [(r1, c1), (r2, c2)] = refl.modes();
    Ok(match kernel {
        Kernel::Pressure => {
            let em1 = y.exp_m1();
            (f_ss(r1, c1, em1), f_ss(r2, c2, em1))
        }
        Kernel::Energy => {
            let ey = (-y).exp();
            let om = -(-y).exp_m1();
            (f_sl(r1, c1, ey, om), f_sl(r2, c2, ey, om))
        }
    })
}

/// `(f₁, f₂)` with `f_i = r_i²/(e^y − r_i²)` at ξ̃ > 0 (any ξ̃ ≥ 0 for dielectrics).
pub fn integrand_ss(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64) -> Result<(f64, f64)> {
    integrand_pair(model, xi_tilde, y, a, Kernel::Pressure)
}

/// `(f₁, f₂)` with `f_i = ln(1 − r_i² e^{−y})`.
pub fn integrand_sl(model: &PermittivityModel, xi_tilde: f64, y: f64, a: f64) -> Result<(f64, f64)> {
    integrand_pair(model, xi_tilde, y, a, Kernel::Energy)
}

fn effective_prescription(model: &PermittivityModel, p: Prescription, opts: &LifshitzOptions) -> Prescription {
    match (model, p) {
        (PermittivityModel::Drude { gamma, .. }, Prescription::Raw)
            if *gamma > 0.0 && opts.raw_drude_as_zero_transverse =>
        {
            Prescription::ZeroTransverse
        }
        _ => p,
    }
}

/// Bracket `{ I₀ + 2 Σ I_l }` with its pieces, all in dimensionless units.
struct Bracket {
    zero: f64,
    tail: Vec<f64>,
    l_max: u64,
    quad_err: f64,
}

impl Bracket {
    fn total(&self) -> f64 {
        self.zero + self.tail.iter().sum::<f64>()
    }

    fn rel_error(&self, spec: &SeriesSpec) -> f64 {
        let total = self.total().abs();
        if total == 0.0 {
            return 0.0;
        }
        let last = self.tail.last().copied().unwrap_or(0.0).abs();
        // terms decay at least geometrically past the stopping point
        let truncation = spec.consecutive as f64 * last;
        (self.quad_err + truncation) / total
    }

    fn into_result(self, prefactor: f64, unit: Unit, spec: &SeriesSpec) -> ForceResult {
        let est_rel_error = self.rel_error(spec);
        let zero_term = prefactor * self.zero;
        let tail_terms: Vec<f64> = self.tail.iter().map(|t| prefactor * t).collect();
        let value = zero_term + tail_terms.iter().sum::<f64>();
        ForceResult {
            value,
            unit,
            zero_term,
            tail_terms,
            l_max_used: self.l_max,
            est_rel_error,
        }
    }
}

/// Sums `term(first..)` under the stopping rule, evaluating terms in parallel
/// blocks. Terms are consumed in ascending order, so the result does not depend
/// on the thread schedule.
fn matsubara_sum<F>(baseline: f64, spec: &SeriesSpec, term: F) -> Result<(Vec<f64>, u64, f64)>
where
    F: Fn(u64) -> Result<(f64, f64)> + Sync,
{
    let mut buffer: Vec<(f64, f64)> = Vec::new();
    let mut next = 1u64;
    let mut block = 8u64;
    let mut quad_err = 0.0;
    let res = sum_until_converged(1, baseline, spec, |l| {
        let idx = (l - 1) as usize;
        if idx >= buffer.len() {
            let hi = next + block;
            let chunk: Result<Vec<(f64, f64)>> = (next..hi).into_par_iter().map(&term).collect();
            buffer.extend(chunk?);
            next = hi;
            block = (block * 2).min(512);
        }
        let (v, e) = buffer[idx];
        quad_err += e;
        Ok(v)
    })?;
    Ok((res.terms, res.l_max_used, quad_err))
}

fn thermal_bracket(
    model: &PermittivityModel,
    prescription: Prescription,
    a: f64,
    thermal: &ThermalState,
    kernel: Kernel,
    opts: &LifshitzOptions,
) -> Result<Bracket> {
    model.validate()?;
    let prescription = effective_prescription(model, prescription, opts);
    // surface prescription errors before integrating
    zero_frequency_values(model, prescription, 1.0, a)?;

    let zero = integrate_semi_infinite_sqrt(
        |y| match zero_frequency_values(model, prescription, y, a) {
            Ok(refl) => kernel.eval(&refl, y),
            Err(_) => 0.0,
        },
        0.0,
        &opts.quad,
    )?;

    let (tail, l_max, tail_err) = matsubara_sum(zero.value, &opts.series, |l| {
        let xi = thermal.xi_tilde(l);
        let r = integrate_semi_infinite(
            |y| kernel.eval(&reflectivity_unchecked(model, xi, y, a), y),
            xi,
            &opts.quad,
        )?;
        Ok((2.0 * r.value, 2.0 * r.err_estimate))
    })?;
    Ok(Bracket {
        zero: zero.value,
        tail,
        l_max,
        quad_err: zero.err_estimate + tail_err,
    })
}

/// Plate–plate pressure at temperature `temperature`, N/m².
pub fn force_plate_plate(
    model: &PermittivityModel,
    prescription: Prescription,
    a: f64,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<ForceResult> {
    let g = Geometry::PlatePlate { a };
    g.validate()?;
    let th = ThermalState::new(temperature, a)?;
    let b = thermal_bracket(model, prescription, a, &th, Kernel::Pressure, opts)?;
    let pref = -K_B * temperature / (16.0 * std::f64::consts::PI * a.powi(3));
    Ok(b.into_result(pref, Unit::Pascal, &opts.series))
}

/// Sphere–plate force in the proximity force approximation, N.
pub fn force_sphere_plate(
    model: &PermittivityModel,
    prescription: Prescription,
    a: f64,
    radius: f64,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<ForceResult> {
    let g = Geometry::SpherePlate { a, radius };
    g.validate()?;
    let th = ThermalState::new(temperature, a)?;
    let b = thermal_bracket(model, prescription, a, &th, Kernel::Energy, opts)?;
    let pref = K_B * temperature * radius / (8.0 * a * a);
    Ok(b.into_result(pref, Unit::Newton, &opts.series))
}

/// Plate–plate free energy per unit area, J/m².
pub fn free_energy_plate_plate(
    model: &PermittivityModel,
    prescription: Prescription,
    a: f64,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<ForceResult> {
    Geometry::PlatePlate { a }.validate()?;
    let th = ThermalState::new(temperature, a)?;
    let b = thermal_bracket(model, prescription, a, &th, Kernel::Energy, opts)?;
    let pref = K_B * temperature / (16.0 * std::f64::consts::PI * a * a);
    Ok(b.into_result(pref, Unit::JoulePerSquareMetre, &opts.series))
}

/// Force (pressure for plates) at `temperature`, dispatching on geometry.
pub fn force(
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<ForceResult> {
    match *geometry {
        Geometry::PlatePlate { a } => force_plate_plate(model, prescription, a, temperature, opts),
        Geometry::SpherePlate { a, radius } => force_sphere_plate(model, prescription, a, radius, temperature, opts),
    }
}

/// ∫₀^∞ dξ̃ ∫_ξ̃^∞ (kernel) dy, with the inner integrals held to a tighter tolerance.
fn zero_temperature_bracket(
    model: &PermittivityModel,
    a: f64,
    kernel: Kernel,
    opts: &LifshitzOptions,
) -> Result<Bracket> {
    model.validate()?;
    let inner_spec = QuadratureSpec {
        rel_tol: (opts.quad.rel_tol * 1e-2).max(2e-14),
        ..opts.quad
    };
    let mut failure: Option<Error> = None;
    let outer = integrate_semi_infinite_sqrt(
        |xi| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate_semi_infinite(
                |y| kernel.eval(&reflectivity_unchecked(model, xi, y, a), y),
                xi,
                &inner_spec,
            ) {
                Ok(r) => r.value,
                Err(e) => {
                    failure = Some(e.into());
                    0.0
                }
            }
        },
        0.0,
        &opts.quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(Bracket {
        zero: outer.value,
        tail: Vec::new(),
        l_max: 0,
        quad_err: outer.err_estimate,
    })
}

/// Force (pressure for plates) at T = 0 from the continuous-frequency integral.
pub fn force_t0(model: &PermittivityModel, geometry: &Geometry, opts: &LifshitzOptions) -> Result<ForceResult> {
    geometry.validate()?;
    let a = geometry.a();
    let kernel = Kernel::for_geometry(geometry);
    let b = zero_temperature_bracket(model, a, kernel, opts)?;
    let pi = std::f64::consts::PI;
    let pref = match *geometry {
        Geometry::PlatePlate { .. } => -HBAR_C / (32.0 * pi * pi * a.powi(4)),
        Geometry::SpherePlate { radius, .. } => HBAR_C * radius / (16.0 * pi * a.powi(3)),
    };
    Ok(b.into_result(pref, geometry.unit(), &opts.series))
}

/// Plate–plate free energy per unit area at T = 0, J/m².
pub fn free_energy_t0(model: &PermittivityModel, a: f64, opts: &LifshitzOptions) -> Result<ForceResult> {
    Geometry::PlatePlate { a }.validate()?;
    let b = zero_temperature_bracket(model, a, Kernel::Energy, opts)?;
    let pi = std::f64::consts::PI;
    let pref = HBAR_C / (32.0 * pi * pi * a.powi(3));
    Ok(b.into_result(pref, Unit::JoulePerSquareMetre, &opts.series))
}

/// The same thermal force evaluated in physical variables: imaginary frequency
/// ξ_l = 2πlk_BT/ħ and transverse wave number k⊥, with `q² = ξ²/c² + k⊥²`.
///
/// ```text
/// P = −(k_BT/π) Σ'_l ∫₀^∞ k⊥ dk⊥ q Σ_i (r_i⁻² e^{2aq} − 1)⁻¹
/// F =   k_BTR  Σ'_l ∫₀^∞ k⊥ dk⊥   Σ_i ln(1 − r_i² e^{−2aq})
/// ```
///
/// The k⊥ integral runs over `s = 2ak⊥`. Used as an independent check of the
/// dimensionless path.
pub fn force_kperp_representation(
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<ForceResult> {
    geometry.validate()?;
    model.validate()?;
    let a = geometry.a();
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let prescription = effective_prescription(model, prescription, opts);
    zero_frequency_values(model, prescription, 1.0, a)?;
    let pressure = matches!(geometry, Geometry::PlatePlate { .. });

    let summand = |r_sq: f64, q: f64| -> f64 {
        let x = 2.0 * a * q;
        if pressure {
            if r_sq == 0.0 {
                0.0
            } else {
                r_sq / (x.exp() - r_sq)
            }
        } else {
            (-r_sq * (-x).exp()).ln_1p()
        }
    };
    // integrand in s = 2ak⊥ of k⊥·(q)·Σ_i(...), in SI per unit s
    let weight = |k: f64, q: f64| -> f64 {
        let jac = 1.0 / (2.0 * a);
        if pressure {
            k * q * jac
        } else {
            k * jac
        }
    };

    let zero = integrate_semi_infinite_sqrt(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            let k = s / (2.0 * a);
            match zero_frequency_values(model, prescription, s, a) {
                Ok(refl) => weight(k, k) * (summand(refl.r1_sq, k) + summand(refl.r2_sq, k)),
                Err(_) => 0.0,
            }
        },
        0.0,
        &opts.quad,
    )?;
    let xi_step = 2.0 * std::f64::consts::PI * K_B * temperature / HBAR;
    let (tail, l_max, tail_err) = matsubara_sum(zero.value, &opts.series, |l| {
        let xi = l as f64 * xi_step;
        let w = xi / C;
        let mut bad = None;
        let r = integrate_semi_infinite(
            |s| {
                let k = s / (2.0 * a);
                let q = (w * w + k * k).sqrt();
                match reflectivity_kperp(model, xi, k, a) {
                    Ok((r1, r2)) => weight(k, q) * (summand(r1, q) + summand(r2, q)),
                    Err(e) => {
                        bad = Some(e);
                        0.0
                    }
                }
            },
            0.0,
            &opts.quad,
        )?;
        if let Some(e) = bad {
            return Err(e);
        }
        Ok((2.0 * r.value, 2.0 * r.err_estimate))
    })?;
    let b = Bracket {
        zero: zero.value,
        tail,
        l_max,
        quad_err: zero.err_estimate + tail_err,
    };
    // Σ' carries a factor 1/2 on the whole bracket {I₀ + 2ΣI_l}
    let (pref, unit) = match *geometry {
        Geometry::PlatePlate { .. } => (-K_B * temperature / std::f64::consts::PI / 2.0, Unit::Pascal),
        Geometry::SpherePlate { radius, .. } => (K_B * temperature * radius / 2.0, Unit::Newton),
    };
    Ok(b.into_result(pref, unit, &opts.series))
}
