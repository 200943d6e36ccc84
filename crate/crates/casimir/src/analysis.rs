//! Relative corrections, comparison tables and plot-ready datasets.
//!
//! * `δ_T = (F(a, T) − F(a, 0))/F(a, 0)`, the temperature correction. The
//!   baseline `F(a, 0)` is always the continuous-frequency T = 0 force of the
//!   same material, which needs no zero-frequency prescription.
//! * `δ_c = (F_ideal(a, T) − F(a, T))/F_ideal(a, T)`, the finite conductivity
//!   correction relative to the ideal metal at the same temperature.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{coeff_i1, coeff_i2};
use crate::constants::{AL_GAMMA, AL_OMEGA_P, C, HBAR, K_B, MICRON, ROOM_TEMPERATURE, ZETA3};
use crate::error::{Error, Result};
use crate::lifshitz::{
    force, force_t0, free_energy_plate_plate, free_energy_t0, ForceResult, Geometry, LifshitzOptions,
};
use crate::models::PermittivityModel;
use crate::reflection::Prescription;

/// Sphere radius used for sphere–plate tables and figures, m. Relative
/// corrections do not depend on it.
pub const DEFAULT_RADIUS: f64 = 1e-2;

/// Separations of the comparison tables, μm.
pub const TABLE_SEPARATIONS_UM: [f64; 9] = [0.1, 0.3, 0.5, 0.7, 1.0, 3.0, 5.0, 7.0, 10.0];

/// How the T = 0 reference of δ_T is obtained; recorded in output metadata.
pub const DELTA_T_BASELINE: &str = "continuous-frequency T = 0 force of the same material; prescription-independent";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Force,
    Energy,
    DeltaT,
    DeltaC,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Force => "force",
            Quantity::Energy => "energy",
            Quantity::DeltaT => "delta-t",
            Quantity::DeltaC => "delta-c",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "force" => Ok(Quantity::Force),
            "energy" => Ok(Quantity::Energy),
            "delta-t" | "t" => Ok(Quantity::DeltaT),
            "delta-c" | "c" => Ok(Quantity::DeltaC),
            other => Err(Error::Config(format!(
                "unknown quantity '{other}' (expected force, energy, delta-t or delta-c)"
            ))),
        }
    }
}

/// A value with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub est_rel_error: f64,
}

impl From<&ForceResult> for Estimate {
    fn from(r: &ForceResult) -> Self {
        Estimate {
            value: r.value,
            est_rel_error: r.est_rel_error,
        }
    }
}

/// (x − y)/y with propagated error.
fn relative_difference(x: Estimate, y: Estimate) -> Estimate {
    let value = (x.value - y.value) / y.value;
    let abs_err = (x.value / y.value).abs() * (x.est_rel_error + y.est_rel_error);
    Estimate {
        value,
        est_rel_error: if value == 0.0 { abs_err } else { abs_err / value.abs() },
    }
}

fn force_at(
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<Estimate> {
    let r = if temperature == 0.0 {
        force_t0(model, geometry, opts)?
    } else {
        force(model, prescription, geometry, temperature, opts)?
    };
    Ok(Estimate::from(&r))
}

/// Relative temperature correction at `temperature`.
pub fn delta_t(
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<Estimate> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!("δ_T needs T > 0, got {temperature}")));
    }
    let hot = force_at(model, prescription, geometry, temperature, opts)?;
    let cold = force_at(model, prescription, geometry, 0.0, opts)?;
    Ok(relative_difference(hot, cold))
}

/// Relative finite conductivity correction at `temperature` (T = 0 allowed).
pub fn delta_c(
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<Estimate> {
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    let real = force_at(model, prescription, geometry, temperature, opts)?;
    let ideal = force_at(
        &PermittivityModel::IdealMetal,
        prescription,
        geometry,
        temperature,
        opts,
    )?;
    let d = relative_difference(real, ideal);
    Ok(Estimate {
        value: -d.value,
        est_rel_error: d.est_rel_error,
    })
}

/// Any supported quantity at one point.
pub fn evaluate(
    quantity: Quantity,
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<Estimate> {
    match quantity {
        Quantity::Force => force_at(model, prescription, geometry, temperature, opts),
        Quantity::Energy => {
            let Geometry::PlatePlate { a } = *geometry else {
                return Err(Error::Config(
                    "the free energy is defined for plate-plate geometry".into(),
                ));
            };
            let r = if temperature == 0.0 {
                free_energy_t0(model, a, opts)?
            } else {
                free_energy_plate_plate(model, prescription, a, temperature, opts)?
            };
            Ok(Estimate::from(&r))
        }
        Quantity::DeltaT => delta_t(model, prescription, geometry, temperature, opts),
        Quantity::DeltaC => delta_c(model, prescription, geometry, temperature, opts),
    }
}

/// One output row of the flat CSV/JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub a_um: f64,
    pub model: String,
    pub prescription: String,
    pub quantity: String,
    pub value: f64,
    pub est_rel_error: f64,
}

pub const CSV_HEADER: &str = "a_um,model,prescription,quantity,value,est_rel_error";

impl Record {
    pub fn new(a: f64, model: &PermittivityModel, prescription: Prescription, quantity: &str, e: Estimate) -> Self {
        Record {
            a_um: a / MICRON,
            model: model.label().into(),
            prescription: if matches!(model, PermittivityModel::IdealMetal) {
                "any".into()
            } else {
                prescription.label().into()
            },
            quantity: quantity.into(),
            value: e.value,
            est_rel_error: e.est_rel_error,
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            fmt_float(self.a_um),
            self.model,
            self.prescription,
            self.quantity,
            fmt_float(self.value),
            fmt_float(self.est_rel_error)
        )
    }
}

/// Fixed-width scientific notation with 12 digits after the point.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.12e}")
}

pub fn records_to_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Provenance attached to JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub constants: Constants,
    pub tolerances: LifshitzOptions,
    pub delta_t_baseline: &'static str,
    pub temperature_k: f64,
    pub build: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub zeta3: f64,
    pub al_omega_p: f64,
    pub al_gamma: f64,
}

impl Meta {
    pub fn new(opts: &LifshitzOptions, temperature: f64, build: impl Into<String>) -> Self {
        Meta {
            constants: Constants {
                hbar: HBAR,
                c: C,
                k_b: K_B,
                zeta3: ZETA3,
                al_omega_p: AL_OMEGA_P,
                al_gamma: AL_GAMMA,
            },
            tolerances: *opts,
            delta_t_baseline: DELTA_T_BASELINE,
            temperature_k: temperature,
            build: build.into(),
        }
    }
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    meta: &'a Meta,
    data: &'a T,
}

/// `{"meta": …, "data": …}`, pretty-printed.
pub fn to_json<T: Serialize>(meta: &Meta, data: &T) -> Result<String> {
    serde_json::to_string_pretty(&JsonDoc { meta, data }).map_err(|e| Error::Config(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    /// Parallel plates.
    Table1,
    /// Sphere above a plate.
    Table2,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table1" | "1" | "plate-plate" => Ok(TableKind::Table1),
            "table2" | "2" | "sphere-plate" => Ok(TableKind::Table2),
            other => Err(Error::Config(format!(
                "unknown table '{other}' (expected table1 or table2)"
            ))),
        }
    }
}

impl TableKind {
    pub fn geometry(self, a: f64) -> Geometry {
        match self {
            TableKind::Table1 => Geometry::PlatePlate { a },
            TableKind::Table2 => Geometry::SpherePlate {
                a,
                radius: DEFAULT_RADIUS,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Column {
    pub label: &'static str,
    pub model: PermittivityModel,
    pub prescription: Prescription,
}

/// The six δ_T columns of the comparison tables.
pub fn table_columns() -> [Column; 6] {
    let drude = PermittivityModel::aluminium_drude();
    let plasma = PermittivityModel::aluminium_plasma();
    [
        Column {
            label: "drude/modified-sdm",
            model: drude,
            prescription: Prescription::ModifiedSdm,
        },
        Column {
            label: "plasma/modified-sdm",
            model: plasma,
            prescription: Prescription::ModifiedSdm,
        },
        Column {
            label: "ideal",
            model: PermittivityModel::IdealMetal,
            prescription: Prescription::ModifiedSdm,
        },
        Column {
            label: "drude/zero-transverse",
            model: drude,
            prescription: Prescription::ZeroTransverse,
        },
        Column {
            label: "drude/unit-reflection",
            model: drude,
            prescription: Prescription::UnitReflection,
        },
        Column {
            label: "plasma/unit-reflection",
            model: plasma,
            prescription: Prescription::UnitReflection,
        },
    ]
}

/// Cells where published reference tables are known to be misprinted.
pub const REFERENCE_MISPRINTS: [(TableKind, f64, usize, &str); 1] = [(
    TableKind::Table1,
    0.5,
    1,
    "reference tables list 2.11e-5 here, which breaks monotonicity in a; the computed value is shown",
)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionRow {
    /// m
    pub a: f64,
    /// δ_T per column, in column order.
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub kind: TableKind,
    pub temperature: f64,
    pub columns: Vec<Column>,
    pub rows: Vec<CorrectionRow>,
}

/// δ_T table over [`TABLE_SEPARATIONS_UM`] at `temperature`.
pub fn make_table(kind: TableKind, temperature: f64, opts: &LifshitzOptions) -> Result<Table> {
    make_table_at(kind, &TABLE_SEPARATIONS_UM, temperature, opts)
}

/// δ_T table at arbitrary separations (μm).
pub fn make_table_at(
    kind: TableKind,
    separations_um: &[f64],
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<Table> {
    let columns = table_columns();
    let rows: Result<Vec<CorrectionRow>> = separations_um
        .par_iter()
        .map(|&a_um| {
            let g = kind.geometry(a_um * MICRON);
            let mut baselines: Vec<(PermittivityModel, Estimate)> = Vec::new();
            let mut values = Vec::with_capacity(columns.len());
            let mut errors = Vec::with_capacity(columns.len());
            for col in &columns {
                let cold = match baselines.iter().find(|(m, _)| *m == col.model) {
                    Some((_, e)) => *e,
                    None => {
                        let e = force_at(&col.model, col.prescription, &g, 0.0, opts)?;
                        baselines.push((col.model, e));
                        e
                    }
                };
                let hot = force_at(&col.model, col.prescription, &g, temperature, opts)?;
                let d = relative_difference(hot, cold);
                values.push(d.value);
                errors.push(d.est_rel_error);
            }
            Ok(CorrectionRow {
                a: a_um * MICRON,
                values,
                errors,
            })
        })
        .collect();
    Ok(Table {
        kind,
        temperature,
        columns: columns.to_vec(),
        rows: rows?,
    })
}

/// Three significant figures in the style `5.16e-3`.
pub fn fmt_sig3(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let e = v.abs().log10().floor() as i32;
    if (-1..=1).contains(&e) {
        // plain decimal, three significant figures
        let decimals = (2 - e).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // rounding may have carried into a new digit
        let e2 = s
            .trim_start_matches('-')
            .parse::<f64>()
            .map(|x| x.log10().floor() as i32)
            .unwrap_or(e);
        if e2 != e {
            return fmt_sig3(s.parse().unwrap_or(v));
        }
        s
    } else {
        format!("{v:.2e}")
    }
}

impl Table {
    fn misprints(&self) -> Vec<(usize, usize, &'static str)> {
        REFERENCE_MISPRINTS
            .iter()
            .filter(|(k, ..)| *k == self.kind)
            .filter_map(|&(_, a_um, col, note)| {
                self.rows
                    .iter()
                    .position(|r| (r.a / MICRON - a_um).abs() < 1e-9)
                    .map(|row| (row, col, note))
            })
            .collect()
    }

    /// Aligned text table, three significant figures.
    pub fn to_text(&self) -> String {
        let flags = self.misprints();
        let mut out = String::new();
        let title = match self.kind {
            TableKind::Table1 => "plate-plate",
            TableKind::Table2 => "sphere-plate",
        };
        let _ = writeln!(
            out,
            "# relative temperature correction delta_T, {title}, T = {} K",
            self.temperature
        );
        let _ = write!(out, "{:>8}", "a_um");
        for c in &self.columns {
            let _ = write!(out, " {:>23}", c.label);
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{:>8}", fmt_sig3(row.a / MICRON));
            for (j, v) in row.values.iter().enumerate() {
                let mark = if flags.iter().any(|&(r, c, _)| r == i && c == j) {
                    "*"
                } else {
                    ""
                };
                let _ = write!(out, " {:>23}", format!("{}{mark}", fmt_sig3(*v)));
            }
            out.push('\n');
        }
        for (_, _, note) in flags {
            let _ = writeln!(out, "* {note}");
        }
        out
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for row in &self.rows {
            for ((c, v), e) in self.columns.iter().zip(&row.values).zip(&row.errors) {
                out.push(Record::new(
                    row.a,
                    &c.model,
                    c.prescription,
                    Quantity::DeltaT.label(),
                    Estimate {
                        value: *v,
                        est_rel_error: *e,
                    },
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    /// rad/s
    pub gamma: f64,
    pub delta_t_drude: f64,
    pub delta_t_plasma: f64,
}

/// Plate–plate δ_T of the Drude model (light-cone zero-frequency rule) as the
/// relaxation frequency varies, next to the plasma-model value.
pub fn gamma_sweep(a: f64, temperature: f64, gammas: &[f64], opts: &LifshitzOptions) -> Result<Vec<SweepPoint>> {
    let g = Geometry::PlatePlate { a };
    let plasma = delta_t(
        &PermittivityModel::aluminium_plasma(),
        Prescription::ModifiedSdm,
        &g,
        temperature,
        opts,
    )?
    .value;
    gammas
        .par_iter()
        .map(|&gamma| {
            let m = PermittivityModel::Drude {
                omega_p: AL_OMEGA_P,
                gamma,
            };
            Ok(SweepPoint {
                gamma,
                delta_t_drude: delta_t(&m, Prescription::ModifiedSdm, &g, temperature, opts)?.value,
                delta_t_plasma: plasma,
            })
        })
        .collect()
}

/// `count` points from `lo` to `hi`, linear or logarithmic.
pub fn grid(lo: f64, hi: f64, count: usize, log: bool) -> Result<Vec<f64>> {
    if !(lo < hi) || count < 2 || (log && lo <= 0.0) {
        return Err(Error::Config(format!(
            "invalid grid {lo}:{hi}:{count}{}",
            if log { " (log)" } else { "" }
        )));
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let f = i as f64 / n;
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else if log {
                (lo.ln() + f * (hi.ln() - lo.ln())).exp()
            } else {
                lo + f * (hi - lo)
            }
        })
        .collect())
}

/// Flat sweep of one quantity over separations (m).
pub fn sweep(
    quantity: Quantity,
    model: &PermittivityModel,
    prescription: Prescription,
    geometry: &Geometry,
    temperature: f64,
    separations: &[f64],
    opts: &LifshitzOptions,
) -> Result<Vec<Record>> {
    separations
        .par_iter()
        .map(|&a| {
            let g = geometry.with_separation(a);
            let e = evaluate(quantity, model, prescription, &g, temperature, opts)?;
            Ok(Record::new(a, model, prescription, quantity.label(), e))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 8] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Figure::Fig1 => "plate-plate delta_T vs a: Drude (modified-sdm), Drude (zero-transverse), dielectric",
            Figure::Fig2 => "plate-plate delta_c vs a, Drude: 300 K modified-sdm, 300 K unit-reflection, 0 K",
            Figure::Fig3 => "plate-plate delta_c vs a, plasma: 300 K modified-sdm, 300 K unit-reflection, 0 K",
            Figure::Fig4 => "plate-plate delta_T vs relaxation frequency at a = 2 um: Drude, plasma",
            Figure::Fig5 => "sphere-plate delta_T vs a: Drude (modified-sdm), Drude (zero-transverse), dielectric",
            Figure::Fig6 => "sphere-plate delta_c vs a, Drude: 300 K modified-sdm, 300 K unit-reflection, 0 K",
            Figure::Fig7 => "sphere-plate delta_c vs a, plasma: 300 K modified-sdm, 300 K unit-reflection, 0 K",
            Figure::Fig8 => "coefficient integrals I1, I2 vs dimensionless relaxation frequency",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .to_ascii_lowercase()
            .trim_start_matches("fig")
            .trim_start_matches("ure")
            .trim()
            .parse::<usize>()
            .ok();
        match n {
            Some(k @ 1..=8) => Ok(Figure::ALL[k - 1]),
            _ => Err(Error::Config(format!("unknown figure '{s}' (expected fig1 … fig8)"))),
        }
    }
}

/// Columnar data: one x column and one y column per curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub figure: Figure,
    pub x_label: String,
    pub curve_labels: Vec<String>,
    pub x: Vec<f64>,
    /// `y[curve][point]`
    pub y: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.x_label);
        for l in &self.curve_labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            out.push_str(&fmt_float(*x));
            for curve in &self.y {
                out.push(',');
                out.push_str(&fmt_float(curve[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Default separation grid for figures, μm.
pub fn figure_separations_um() -> Vec<f64> {
    grid(0.1, 10.0, 21, true).expect("static grid")
}

type CurveFn = dyn Fn(&Geometry) -> Result<f64> + Sync;

fn curves_over_a(
    figure: Figure,
    separations_um: &[f64],
    sphere: bool,
    curves: Vec<(String, Box<CurveFn>)>,
) -> Result<Dataset> {
    let ys: Result<Vec<Vec<f64>>> = curves
        .iter()
        .map(|(_, f)| {
            separations_um
                .par_iter()
                .map(|&a_um| {
                    let a = a_um * MICRON;
                    let g = if sphere {
                        Geometry::SpherePlate {
                            a,
                            radius: DEFAULT_RADIUS,
                        }
                    } else {
                        Geometry::PlatePlate { a }
                    };
                    f(&g)
                })
                .collect()
        })
        .collect();
    Ok(Dataset {
        figure,
        x_label: "a_um".into(),
        curve_labels: curves.into_iter().map(|(l, _)| l).collect(),
        x: separations_um.to_vec(),
        y: ys?,
    })
}

/// Plot-ready data for one figure. `separations_um` overrides the default grid of
/// the separation-based figures.
pub fn figure_data(
    figure: Figure,
    temperature: f64,
    separations_um: Option<&[f64]>,
    opts: &LifshitzOptions,
) -> Result<Dataset> {
    let default = figure_separations_um();
    let xs = separations_um.unwrap_or(&default);
    let o = *opts;
    let drude = PermittivityModel::aluminium_drude();
    let plasma = PermittivityModel::aluminium_plasma();
    let mica = PermittivityModel::mica();
    let dt = move |m: PermittivityModel, p: Prescription| -> Box<CurveFn> {
        Box::new(move |g: &Geometry| Ok(delta_t(&m, p, g, temperature, &o)?.value))
    };
    let dc = move |m: PermittivityModel, p: Prescription, temp: f64| -> Box<CurveFn> {
        Box::new(move |g: &Geometry| Ok(delta_c(&m, p, g, temp, &o)?.value))
    };
    match figure {
        Figure::Fig1 | Figure::Fig5 => curves_over_a(
            figure,
            xs,
            figure == Figure::Fig5,
            vec![
                ("drude_modified_sdm".into(), dt(drude, Prescription::ModifiedSdm)),
                ("drude_zero_transverse".into(), dt(drude, Prescription::ZeroTransverse)),
                ("dielectric".into(), dt(mica, Prescription::Raw)),
            ],
        ),
        Figure::Fig2 | Figure::Fig3 | Figure::Fig6 | Figure::Fig7 => {
            let m = if matches!(figure, Figure::Fig2 | Figure::Fig6) {
                drude
            } else {
                plasma
            };
            curves_over_a(
                figure,
                xs,
                matches!(figure, Figure::Fig6 | Figure::Fig7),
                vec![
                    ("modified_sdm".into(), dc(m, Prescription::ModifiedSdm, temperature)),
                    (
                        "unit_reflection".into(),
                        dc(m, Prescription::UnitReflection, temperature),
                    ),
                    ("zero_temperature".into(), dc(m, Prescription::ModifiedSdm, 0.0)),
                ],
            )
        }
        Figure::Fig4 => {
            let gammas = grid(AL_GAMMA * 1e-4, AL_GAMMA, 21, true)?;
            let pts = gamma_sweep(2.0 * MICRON, temperature, &gammas, opts)?;
            Ok(Dataset {
                figure,
                x_label: "gamma_rad_s".into(),
                curve_labels: vec!["drude".into(), "plasma".into()],
                x: gammas,
                y: vec![
                    pts.iter().map(|p| p.delta_t_drude).collect(),
                    pts.iter().map(|p| p.delta_t_plasma).collect(),
                ],
            })
        }
        Figure::Fig8 => {
            let gs = grid(0.0, 20.0, 41, false)?;
            let i1: Result<Vec<f64>> = gs.iter().map(|&g| coeff_i1(g)).collect();
            let i2: Result<Vec<f64>> = gs.iter().map(|&g| coeff_i2(g)).collect();
            Ok(Dataset {
                figure,
                x_label: "gamma_tilde".into(),
                curve_labels: vec!["i1".into(), "i2".into()],
                x: gs,
                y: vec![i1?, i2?],
            })
        }
    }
}

/// Default temperature for analysis commands, K.
pub const DEFAULT_TEMPERATURE: f64 = ROOM_TEMPERATURE;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_figures() {
        assert_eq!(fmt_sig3(5.1634e-3), "5.16e-3");
        assert_eq!(fmt_sig3(0.12345), "0.123");
        assert_eq!(fmt_sig3(-0.1384), "-0.138");
        assert_eq!(fmt_sig3(1.1666), "1.17");
        assert_eq!(fmt_sig3(3.5712), "3.57");
        assert_eq!(fmt_sig3(10.0), "10.0");
        assert_eq!(fmt_sig3(0.9996), "1.00");
        assert_eq!(fmt_sig3(6.57e-6), "6.57e-6");
    }

    #[test]
    fn grids() {
        let g = grid(0.1, 10.0, 50, true).unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!((g[0], g[49]), (0.1, 10.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(grid(1.0, 1.0, 3, false).is_err());
        assert!(grid(0.0, 1.0, 3, true).is_err());
    }

    #[test]
    fn csv_schema() {
        let r = Record::new(
            MICRON,
            &PermittivityModel::aluminium_drude(),
            Prescription::ModifiedSdm,
            "delta-t",
            Estimate {
                value: 0.0137,
                est_rel_error: 1e-9,
            },
        );
        let csv = records_to_csv(&[r]);
        assert_eq!(csv.lines().next(), Some(CSV_HEADER));
        assert_eq!(
            csv.lines().nth(1),
            Some("1.000000000000e0,drude,modified-sdm,delta-t,1.370000000000e-2,1.000000000000e-9")
        );
    }

    #[test]
    fn parse_names() {
        assert_eq!("fig8".parse::<Figure>().unwrap(), Figure::Fig8);
        assert_eq!("3".parse::<Figure>().unwrap(), Figure::Fig3);
        assert!("fig9".parse::<Figure>().is_err());
        assert_eq!("delta_c".parse::<Quantity>().unwrap(), Quantity::DeltaC);
        assert_eq!("table2".parse::<TableKind>().unwrap(), TableKind::Table2);
    }

    #[test]
    fn ideal_metal_has_no_conductivity_correction() {
        let g = Geometry::PlatePlate { a: MICRON };
        let d = delta_c(
            &PermittivityModel::IdealMetal,
            Prescription::ModifiedSdm,
            &g,
            300.0,
            &LifshitzOptions::default(),
        )
        .unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn coefficient_figure() {
        let d = figure_data(Figure::Fig8, 300.0, None, &LifshitzOptions::default()).unwrap();
        let i = d.x.iter().position(|&g| g == 1.0).unwrap();
        assert!((d.y[0][i] - 1.3844).abs() < 5e-4);
        assert_eq!(d.to_csv().lines().count(), 42);
    }
}
