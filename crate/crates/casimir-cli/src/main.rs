//! `casimir`: thermal Casimir forces from the command line.

mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use casimir::analysis::{
    self, figure_data, make_table, records_to_csv, sweep, to_json, Estimate, Figure, Meta, Quantity, Record, TableKind,
};
use casimir::asymptotics::{coeff_i1, coeff_i2};
use casimir::constants::MICRON;
use casimir::lifshitz::{force, force_t0, free_energy_plate_plate, free_energy_t0, ForceResult};
use casimir::models::MaterialSpec;
use casimir::reflection::Prescription;
use casimir::{Error, Geometry, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{Format, GeometryKind, RunConfig, Span, SweepConfig};

const BUILD: &str = env!("CASIMIR_GIT_DESCRIBE");

#[derive(Parser, Debug)]
#[command(name = "casimir", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("CASIMIR_GIT_DESCRIBE"), ")"))]
#[command(about = "Thermal Casimir forces between real metals and dielectrics")]
struct Cli {
    /// Output format (default: text for single values and tables, csv for sweeps)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative tolerance of the quadratures
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// TOML run configuration; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the effective configuration as TOML and exit
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default, Clone)]
struct PointArgs {
    #[arg(long, value_enum)]
    geometry: Option<GeometryKind>,
    /// Separation in μm, or lo:hi:count for sweeps
    #[arg(long = "a-um", allow_hyphen_values = true)]
    a_um: Option<Span>,
    /// Sphere radius in μm
    #[arg(long = "R-um", visible_alias = "r-um")]
    radius_um: Option<f64>,
    /// Temperature in K
    #[arg(long = "temp-k")]
    temp_k: Option<f64>,
    /// Material preset: al-drude, al-plasma, ideal, mica, mica-mn
    #[arg(long)]
    material: Option<String>,
    /// modified-sdm, zero-transverse, unit-reflection or raw
    #[arg(long)]
    prescription: Option<Prescription>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pressure (plate-plate) or force (sphere-plate) at one separation
    Force(PointArgs),
    /// Free energy per unit area between plates
    Energy(PointArgs),
    /// Relative temperature (t) or finite-conductivity (c) correction
    Delta {
        #[arg(value_enum)]
        kind: DeltaKind,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Temperature-correction comparison table
    Table {
        #[arg(value_enum)]
        which: TableArg,
        #[arg(long = "temp-k")]
        temp_k: Option<f64>,
        /// Also write the table as CSV to this file
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// One quantity over a range of separations
    Sweep {
        #[arg(long, default_value = "delta-t")]
        quantity: Quantity,
        /// Logarithmic spacing
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Plot-ready data for one of the figures fig1 … fig8
    Figure {
        which: Figure,
        #[arg(long = "temp-k")]
        temp_k: Option<f64>,
        /// Separation grid lo:hi:count in μm (logarithmic)
        #[arg(long = "a-um")]
        a_um: Option<Span>,
    },
    /// Dimensionless coefficient integrals of the high-temperature Drude limit
    Coeff {
        #[arg(value_enum)]
        which: CoeffKind,
        /// Value or lo:hi:count
        #[arg(long = "gamma-tilde", default_value = "1")]
        gamma_tilde: Span,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeltaKind {
    T,
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableArg {
    Table1,
    Table2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoeffKind {
    I1,
    I2,
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_convergence() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn point_args(cmd: &Option<Command>) -> Option<&PointArgs> {
    match cmd {
        Some(
            Command::Force(p) | Command::Energy(p) | Command::Delta { point: p, .. } | Command::Sweep { point: p, .. },
        ) => Some(p),
        _ => None,
    }
}

/// Config file, then command-line overrides.
fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.format.is_some() {
        cfg.run.format = cli.format;
    }
    if cli.rel_tol.is_some() {
        cfg.run.rel_tol = cli.rel_tol;
    }
    let log = matches!(cli.command, Some(Command::Sweep { log: true, .. }));
    if let Some(p) = point_args(&cli.command) {
        if let Some(k) = p.geometry {
            cfg.geometry.kind = k;
            if k == GeometryKind::PlatePlate {
                cfg.geometry.radius_um = None;
            }
        }
        if let Some(r) = p.radius_um {
            cfg.geometry.radius_um = Some(r);
            if p.geometry.is_none() {
                cfg.geometry.kind = GeometryKind::SpherePlate;
            }
        }
        match p.a_um {
            Some(Span::Value(a)) => {
                cfg.geometry.a_um = a;
                cfg.geometry.sweep = None;
            }
            Some(Span::Range { lo, hi, count }) => {
                cfg.geometry.sweep = Some(SweepConfig {
                    min_um: lo,
                    max_um: hi,
                    count,
                    log,
                })
            }
            None => {
                if let Some(s) = cfg.geometry.sweep.as_mut() {
                    s.log |= log;
                }
            }
        }
        if let Some(t) = p.temp_k {
            cfg.run.temperature_k = t;
        }
        if let Some(m) = &p.material {
            cfg.material = MaterialSpec::from_preset(m);
        }
        if let Some(pr) = p.prescription {
            cfg.run.prescription = pr;
        }
    }
    if let Some(Command::Table { temp_k: Some(t), .. } | Command::Figure { temp_k: Some(t), .. }) = &cli.command {
        cfg.run.temperature_k = *t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    let cfg = resolve_config(cli)?;
    if cli.dump_config {
        return emit(cli, &cfg.to_toml()?);
    }
    let Some(command) = &cli.command else {
        return Err(Error::Config("no command given (try --help)".into()).into());
    };
    let opts = cfg.options();
    let temperature = cfg.run.temperature_k;
    let meta = Meta::new(&opts, temperature, BUILD);
    let format = |default: Format| cfg.run.format.unwrap_or(default);

    let output = match command {
        Command::Force(_) | Command::Energy(_) => {
            let energy = matches!(command, Command::Energy(_));
            let model = cfg.model()?;
            let geometry = single_point(&cfg)?;
            let result = if energy {
                let Geometry::PlatePlate { a } = geometry else {
                    return Err(Error::Config("energy is defined for plate-plate geometry".into()).into());
                };
                if temperature == 0.0 {
                    free_energy_t0(&model, a, &opts)?
                } else {
                    free_energy_plate_plate(&model, cfg.run.prescription, a, temperature, &opts)?
                }
            } else if temperature == 0.0 {
                force_t0(&model, &geometry, &opts)?
            } else {
                force(&model, cfg.run.prescription, &geometry, temperature, &opts)?
            };
            let quantity = if energy { "energy" } else { "force" };
            let record = Record::new(
                geometry.a(),
                &model,
                cfg.run.prescription,
                quantity,
                Estimate::from(&result),
            );
            match format(Format::Text) {
                Format::Text => force_text(&cfg, &geometry, quantity, &result),
                Format::Csv => records_to_csv(&[record]),
                Format::Json => to_json(
                    &meta,
                    &ForceReport {
                        config: &cfg,
                        result: &result,
                        zero_term_share: result.zero_term_share(),
                    },
                )?,
            }
        }
        Command::Delta { kind, .. } => {
            let model = cfg.model()?;
            let quantity = match kind {
                DeltaKind::T => Quantity::DeltaT,
                DeltaKind::C => Quantity::DeltaC,
            };
            let geometry = single_point(&cfg)?;
            let e = analysis::evaluate(quantity, &model, cfg.run.prescription, &geometry, temperature, &opts)?;
            let record = Record::new(geometry.a(), &model, cfg.run.prescription, quantity.label(), e);
            match format(Format::Text) {
                Format::Text => format!(
                    "{} = {:.6e}  (est rel error {:.1e})\n",
                    quantity.label(),
                    e.value,
                    e.est_rel_error
                ),
                Format::Csv => records_to_csv(&[record]),
                Format::Json => to_json(&meta, &record)?,
            }
        }
        Command::Table { which, csv_out, .. } => {
            let kind = match which {
                TableArg::Table1 => TableKind::Table1,
                TableArg::Table2 => TableKind::Table2,
            };
            let table = make_table(kind, temperature, &opts)?;
            let csv = records_to_csv(&table.records());
            if let Some(path) = csv_out {
                std::fs::write(path, &csv).map_err(Failure::Io)?;
            }
            match format(Format::Text) {
                Format::Text => table.to_text(),
                Format::Csv => csv,
                Format::Json => to_json(&meta, &table)?,
            }
        }
        Command::Sweep { quantity, .. } => {
            let model = cfg.model()?;
            let separations = match &cfg.geometry.sweep {
                Some(s) => s.separations()?,
                None => vec![cfg.geometry.a_um * MICRON],
            };
            let records = sweep(
                *quantity,
                &model,
                cfg.run.prescription,
                &cfg.geometry(),
                temperature,
                &separations,
                &opts,
            )?;
            match format(Format::Csv) {
                Format::Text => sweep_text(&records),
                Format::Csv => records_to_csv(&records),
                Format::Json => to_json(&meta, &records)?,
            }
        }
        Command::Figure { which, a_um, .. } => {
            let xs = a_um.map(|s| s.values(true)).transpose()?;
            let data = figure_data(*which, temperature, xs.as_deref(), &opts)?;
            match format(Format::Csv) {
                Format::Text | Format::Csv => data.to_csv(),
                Format::Json => to_json(&meta, &data)?,
            }
        }
        Command::Coeff { which, gamma_tilde } => {
            let gs = gamma_tilde.values(false)?;
            let (name, f): (&str, fn(f64) -> Result<f64>) = match which {
                CoeffKind::I1 => ("i1", coeff_i1),
                CoeffKind::I2 => ("i2", coeff_i2),
            };
            let points = gs
                .iter()
                .map(|&g| {
                    Ok(CoeffPoint {
                        gamma_tilde: g,
                        value: f(g)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match format(Format::Csv) {
                Format::Text => points
                    .iter()
                    .map(|p| format!("{name}({}) = {:.8}\n", p.gamma_tilde, p.value))
                    .collect(),
                Format::Csv => {
                    let mut s = format!("gamma_tilde,{name}\n");
                    for p in &points {
                        let _ = writeln!(
                            s,
                            "{},{}",
                            analysis::fmt_float(p.gamma_tilde),
                            analysis::fmt_float(p.value)
                        );
                    }
                    s
                }
                Format::Json => to_json(&meta, &points)?,
            }
        }
    };
    emit(cli, &output)
}

#[derive(Serialize)]
struct ForceReport<'a> {
    config: &'a RunConfig,
    result: &'a ForceResult,
    zero_term_share: f64,
}

#[derive(Serialize)]
struct CoeffPoint {
    gamma_tilde: f64,
    value: f64,
}

fn single_point(cfg: &RunConfig) -> Result<Geometry> {
    if cfg.geometry.sweep.is_some() {
        return Err(Error::Config(
            "this command takes a single separation; use `sweep` for ranges".into(),
        ));
    }
    Ok(cfg.geometry())
}

fn force_text(cfg: &RunConfig, geometry: &Geometry, quantity: &str, r: &ForceResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "geometry         {}", geometry.label());
    if let Geometry::SpherePlate { radius, .. } = geometry {
        let _ = writeln!(s, "radius           {} um", radius / MICRON);
    }
    let _ = writeln!(s, "separation       {} um", geometry.a() / MICRON);
    let _ = writeln!(s, "temperature      {} K", cfg.run.temperature_k);
    let _ = writeln!(s, "prescription     {}", cfg.run.prescription);
    let _ = writeln!(s, "{quantity:<17}{:.9e} {}", r.value, r.unit);
    let _ = writeln!(s, "zero-term share  {:.6}", r.zero_term_share());
    let _ = writeln!(s, "l_max            {}", r.l_max_used);
    let _ = writeln!(s, "est rel error    {:.2e}", r.est_rel_error);
    s
}

fn sweep_text(records: &[Record]) -> String {
    let mut s = format!("{:>12} {:>20} {:>12}\n", "a_um", "value", "rel_err");
    for r in records {
        let _ = writeln!(s, "{:>12.6} {:>20.9e} {:>12.1e}", r.a_um, r.value, r.est_rel_error);
    }
    s
}

fn emit(cli: &Cli, text: &str) -> std::result::Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
