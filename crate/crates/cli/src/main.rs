use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sunmodel::calibrate::{self, ReferenceTable, PRINTED_MASS_TARGET};
use sunmodel::density::ModelParams;
use sunmodel::energy::EnergyParams;
use sunmodel::structure::{Profile, SolarConstants};
use sunmodel::tables::{self, TableOptions};
use sunmodel::validate::{self, ValidateOptions};
use sunmodel::{reference, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sunmodel",
    version,
    about = "Closed-form solar interior model (1 - y^delta)^gamma"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute a printed reference table and compare cell by cell.
    Tables(TablesArgs),
    /// Evaluate density, mass, pressure, temperature and luminosity on a grid.
    Profile(ProfileArgs),
    /// Solve the mass constraint for delta over a range of gamma.
    Calibrate(CalibrateArgs),
    /// Choose (delta, gamma) or a polynomial against reference density data.
    Fit(FitArgs),
    /// Check every closed form against quadrature and series forms.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long, default_value_t = 1.2814)]
    delta: f64,
    #[arg(long, default_value_t = 10)]
    gamma: u32,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams<f64>, Failure> {
        ModelParams::new(self.delta, self.gamma).map_err(Failure::from)
    }
}

#[derive(Args, Debug, Clone)]
struct ConstantsArgs {
    /// JSON file with rho_c, m_total, radius, g_newton, k_boltzmann, avogadro and optional mu.
    #[arg(long, env = "SUNMODEL_CONSTANTS")]
    constants: Option<PathBuf>,
    /// Mean molecular weight; temperatures are in kelvin when set.
    #[arg(long)]
    mu: Option<f64>,
}

impl ConstantsArgs {
    fn load(&self) -> Result<SolarConstants<f64>, Failure> {
        let mut c = match &self.constants {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading constants from {}", path.display()))
                    .map_err(Failure::Usage)?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing constants in {}", path.display()))
                    .map_err(Failure::Usage)?
            }
            None => SolarConstants::sears(),
        };
        if let Some(mu) = self.mu {
            c = c.with_mu(mu);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args, Debug, Clone)]
struct TargetArgs {
    /// Constraint target; defaults to the value implied by the constants.
    #[arg(long, conflicts_with = "printed_target")]
    mass_target: Option<f64>,
    /// Use the rounded target 112.08.
    #[arg(long)]
    printed_target: bool,
}

impl TargetArgs {
    fn resolve(&self, constants: &SolarConstants<f64>) -> f64 {
        match (self.mass_target, self.printed_target) {
            (Some(t), _) => t,
            (None, true) => PRINTED_MASS_TARGET,
            (None, false) => calibrate::mass_target(constants),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TablesArgs {
    /// Table number, 1 to 6.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    id: u8,
    #[command(flatten)]
    model: ModelArgs,
    /// Constraint target for table 2.
    #[arg(long, default_value_t = PRINTED_MASS_TARGET)]
    mass_target: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    constants: ConstantsArgs,
    /// Comma-separated radius fractions.
    #[arg(long, value_delimiter = ',', conflicts_with = "points")]
    grid: Option<Vec<f64>>,
    /// Uniform grid on [0, 1] including both ends.
    #[arg(long, default_value_t = 11)]
    points: usize,
    /// Energy generation coefficient; enables the luminosity column.
    #[arg(long)]
    epsilon0: Option<f64>,
    /// Density exponent of the energy generation rate.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Temperature exponent; only 1 has a closed form.
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[command(flatten)]
    constants: ConstantsArgs,
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, default_value_t = 2)]
    gamma_min: u32,
    #[arg(long, default_value_t = 20)]
    gamma_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    constants: ConstantsArgs,
    #[command(flatten)]
    target: TargetArgs,
    /// CSV with a header row; defaults to the shipped Sears density column.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value = "y")]
    y_column: String,
    #[arg(long, default_value = "sears")]
    value_column: String,
    #[arg(long, default_value_t = 2)]
    gamma_min: u32,
    #[arg(long, default_value_t = 20)]
    gamma_max: u32,
    /// Fit a polynomial of this degree instead of (delta, gamma).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Model used for the pressure-table adjudication.
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    constants: ConstantsArgs,
    /// Relative tolerance of the closed-form against quadrature checks.
    #[arg(long, default_value_t = validate::DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = 25)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Data(_) | Error::Unsupported(_) => Failure::Usage(e.into()),
            _ => Failure::Numeric(e.into()),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn cmd_tables(args: &TablesArgs) -> Result<(String, u8), Failure> {
    let opts = TableOptions {
        params: args.model.params()?,
        mass_target: args.mass_target,
    };
    let report = tables::build(args.id, &opts)?;
    let code = if report.passed() { 0 } else { EXIT_MISMATCH };
    let out = match args.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = format!("# table {}: {}\n", report.id, report.title);
            if let Some(b) = &report.banner {
                let _ = writeln!(s, "# {b}");
            }
            for n in &report.notes {
                let _ = writeln!(s, "# {n}");
            }
            s.push_str(&report.to_csv());
            s
        }
    };
    Ok((out, code))
}

fn uniform_grid(points: usize) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(Failure::Usage(anyhow::anyhow!(
            "--points must be at least 2"
        )));
    }
    Ok(validate::uniform_grid(points))
}

fn cmd_profile(args: &ProfileArgs) -> Result<(String, u8), Failure> {
    let params = args.model.params()?;
    let constants = args.constants.load()?;
    let grid = match &args.grid {
        Some(g) => g.clone(),
        None => uniform_grid(args.points)?,
    };
    let energy = args
        .epsilon0
        .map(|e| EnergyParams::new(e, args.n, args.m))
        .transpose()?;
    let profile = Profile::build(params, constants, &grid, energy)?;
    let out = match args.format {
        Format::Json => json(&profile)?,
        Format::Csv => {
            let mut s = String::from("y,u,m_ratio,g,pressure,temperature,luminosity\n");
            for r in &profile.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    num(r.y),
                    num(r.u),
                    num(r.m_ratio),
                    num(r.g),
                    num(r.pressure),
                    opt(r.temperature),
                    opt(r.luminosity)
                );
            }
            s
        }
    };
    Ok((out, 0))
}

#[derive(Serialize)]
struct CalibrationRow {
    gamma: u32,
    delta: f64,
    delta_at_printed_target: f64,
}

#[derive(Serialize)]
struct Calibration {
    mass_target: f64,
    printed_target: f64,
    rows: Vec<CalibrationRow>,
}

fn gamma_range(min: u32, max: u32) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    if min == 0 || min > max {
        return Err(Failure::Usage(anyhow::anyhow!(
            "need 1 <= gamma-min <= gamma-max"
        )));
    }
    Ok(min..=max)
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<(String, u8), Failure> {
    let constants = args.constants.load()?;
    let target = args.target.resolve(&constants);
    let rows = gamma_range(args.gamma_min, args.gamma_max)?
        .map(|gamma| {
            Ok(CalibrationRow {
                gamma,
                delta: calibrate::solve_delta(gamma, target)?,
                delta_at_printed_target: calibrate::solve_delta(gamma, PRINTED_MASS_TARGET)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = Calibration {
        mass_target: target,
        printed_target: PRINTED_MASS_TARGET,
        rows,
    };
    let out = match args.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = format!(
                "# mass target {}\ngamma,delta,delta_at_printed_target\n",
                num(target)
            );
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    r.gamma,
                    num(r.delta),
                    num(r.delta_at_printed_target)
                );
            }
            s
        }
    };
    Ok((out, 0))
}

fn cmd_fit(args: &FitArgs) -> Result<(String, u8), Failure> {
    let data = match &args.data {
        Some(path) => {
            let file = std::fs::File::open(path)
                .with_context(|| format!("opening {}", path.display()))
                .map_err(Failure::Usage)?;
            ReferenceTable::from_csv(
                file,
                &args.y_column,
                &args.value_column,
                &path.display().to_string(),
            )?
        }
        None => reference::sears_density()?,
    };
    if let Some(degree) = args.degree {
        let poly = calibrate::fit_polynomial(&data, degree)?;
        let out = match args.format {
            Format::Json => json(&poly)?,
            Format::Csv => {
                let mut s = String::from("power,coefficient\n");
                for (k, c) in poly.coefficients.iter().enumerate() {
                    let _ = writeln!(s, "{k},{}", num(*c));
                }
                s
            }
        };
        return Ok((out, 0));
    }
    let constants = args.constants.load()?;
    let target = args.target.resolve(&constants);
    let report =
        calibrate::fit_model_params(&data, gamma_range(args.gamma_min, args.gamma_max)?, target)?;
    let out = match args.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = format!(
                "# best gamma {} delta {} sse {}\n# mass target {}\ngamma,delta,sse\n",
                report.best.gamma(),
                num(report.best.delta()),
                num(report.best_sse),
                num(target)
            );
            for r in &report.rows {
                let _ = writeln!(s, "{},{},{}", r.gamma, num(r.delta), num(r.sse));
            }
            s
        }
    };
    Ok((out, 0))
}

fn cmd_validate(args: &ValidateArgs) -> Result<(String, u8), Failure> {
    if !(args.rel_tol > 0.0) {
        return Err(Failure::Usage(anyhow::anyhow!(
            "--rel-tol must be positive"
        )));
    }
    let opts = ValidateOptions {
        rel_tol: args.rel_tol,
        grid_points: args.points,
        constants: args.constants.load()?,
        params: args.model.params()?,
        ..ValidateOptions::default()
    };
    let report = validate::run(&opts)?;
    let code = if report.passed { 0 } else { EXIT_MISMATCH };
    let out = match args.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = String::from(
                "name,delta,gamma,n,y,closed_form,reference,rel_error,tolerance,passed\n",
            );
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    c.name,
                    c.delta,
                    c.gamma,
                    c.n.map(|n| n.to_string()).unwrap_or_default(),
                    opt(c.y),
                    num(c.closed_form),
                    num(c.reference),
                    num(c.rel_error),
                    num(c.tolerance),
                    c.passed
                );
            }
            s
        }
    };
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Tables(a) => cmd_tables(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e:#}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
