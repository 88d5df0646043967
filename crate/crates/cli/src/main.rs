//! `radiant`: emission windows, spectra and energy budgets for a plate
//! carrying a traveling-wave deformation.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 quadrature or oracle tolerance
//! exceeded, 4 energy conservation check failed, 1 I/O failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::*;
use crate::config::{pick, pick_or, FileConfig};
use crate::error::{CliError, Status};
use crate::output::{emit, Format};

#[derive(Debug, Parser)]
#[command(name = "radiant", version, about)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// JSON file with default values for any flag; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Read omega0 and Omega in rad/s, k0 in rad/m and d in m.
    #[arg(long, global = true)]
    si: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DriveArgs {
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    k0: Option<f64>,
}

#[derive(Debug, Args)]
struct ToleranceArgs {
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
    /// Integrate window edges without the square-root substitution.
    #[arg(long)]
    no_edge_substitution: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regime and window angles at one frequency.
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(long = "Omega")]
        omega: Option<f64>,
    },
    /// Polar bounds of the emission window on an azimuth grid.
    #[command(allow_negative_numbers = true)]
    Window {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(long = "Omega")]
        omega: Option<f64>,
        #[arg(long)]
        phi_grid: Option<usize>,
    },
    /// Photon spectral density on a symmetric frequency grid.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(short = 'd', long = "amplitude")]
        d: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Radiated power and photon rate against their closed forms.
    #[command(allow_negative_numbers = true)]
    Energy {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(short = 'd', long = "amplitude")]
        d: Option<f64>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Regime labels over the (kappa, r) plane with the three trajectory classes.
    #[command(allow_negative_numbers = true)]
    RegimeMap {
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        kappa_max: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        trajectory_points: Option<usize>,
    },
    /// Spectral density for a tabulated deformation spectrum or a mode list.
    #[command(allow_negative_numbers = true)]
    GeneralSpectrum {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Monte Carlo estimate at one frequency compared with the quadrature.
    #[command(allow_negative_numbers = true)]
    Oracle {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(short = 'd', long = "amplitude")]
        d: Option<f64>,
        #[arg(long = "Omega")]
        omega: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Re-parse a JSON record and re-validate its inputs.
    Validate { record: PathBuf },
}

fn tolerances(tol: ToleranceArgs, file: &FileConfig) -> Tolerances {
    let def = Tolerances::default();
    Tolerances {
        rel_tol: pick_or(tol.rel_tol, file.rel_tol, def.rel_tol),
        abs_tol: pick_or(tol.abs_tol, file.abs_tol, def.abs_tol),
        max_subdivisions: pick_or(
            tol.max_subdivisions,
            file.max_subdivisions,
            def.max_subdivisions,
        ),
        edge_substitution: !tol.no_edge_substitution
            && file.edge_substitution.unwrap_or(def.edge_substitution),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RADIANT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        CliError::Validation(format!("RADIANT_THREADS must be >= 1, got {raw:?}"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let si = cli.si || file.si.unwrap_or(false);
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.clone().map(PathBuf::from));
    let format = |default: Format| cli.format.or(file.format).unwrap_or(default);

    let rendered = match cli.command {
        Command::Classify { drive, omega } => classify_cmd(
            ClassifyInputs {
                omega0: pick(drive.omega0, file.omega0, "omega0")?,
                k0: pick(drive.k0, file.k0, "k0")?,
                omega: pick(omega, file.omega, "Omega")?,
                si,
            },
            format(Format::Json),
        )?,
        Command::Window {
            drive,
            omega,
            phi_grid,
        } => window_cmd(
            WindowInputs {
                omega0: pick(drive.omega0, file.omega0, "omega0")?,
                k0: pick(drive.k0, file.k0, "k0")?,
                omega: pick(omega, file.omega, "Omega")?,
                phi_grid: pick_or(phi_grid, file.phi_grid, 181),
                si,
            },
            format(Format::Csv),
        )?,
        Command::Spectrum {
            drive,
            d,
            points,
            tol,
        } => spectrum_cmd(
            SpectrumInputs {
                omega0: pick(drive.omega0, file.omega0, "omega0")?,
                k0: pick(drive.k0, file.k0, "k0")?,
                d: pick(d, file.d, "amplitude")?,
                points: pick_or(points, file.points, 101),
                tolerances: tolerances(tol, &file),
                si,
            },
            format(Format::Csv),
        )?,
        Command::Energy { drive, d, tol } => energy_cmd(
            EnergyInputs {
                omega0: pick(drive.omega0, file.omega0, "omega0")?,
                k0: pick(drive.k0, file.k0, "k0")?,
                d: pick(d, file.d, "amplitude")?,
                tolerances: tolerances(tol, &file),
                si,
            },
            format(Format::Json),
        )?,
        Command::RegimeMap {
            r_max,
            kappa_max,
            grid,
            trajectory_points,
        } => regime_map_cmd(
            RegimeMapInputs {
                r_max: pick_or(r_max, file.r_max, 3.0),
                kappa_max: pick_or(kappa_max, file.kappa_max, 3.0),
                grid: pick_or(grid, file.grid, 200),
                trajectory_points: pick_or(trajectory_points, file.trajectory_points, 200),
            },
            format(Format::Csv),
        )?,
        Command::GeneralSpectrum { input, points, tol } => general_spectrum_cmd(
            GeneralSpectrumInputs {
                input: pick(input, file.input.clone(), "input")?,
                points: pick_or(points, file.points, 101),
                tolerances: tolerances(tol, &file),
            },
            format(Format::Csv),
        )?,
        Command::Oracle {
            drive,
            d,
            omega,
            samples,
            seed,
            tol,
        } => oracle_cmd(
            OracleInputs {
                omega0: pick(drive.omega0, file.omega0, "omega0")?,
                k0: pick(drive.k0, file.k0, "k0")?,
                d: pick(d, file.d, "amplitude")?,
                omega: pick(omega, file.omega, "Omega")?,
                samples: pick_or(samples, file.samples, 1_000_000),
                seed: pick_or(seed, file.seed, 0),
                tolerances: tolerances(tol, &file),
                si,
            },
            format(Format::Json),
        )?,
        Command::Validate { record } => Rendered {
            text: validate_record(&record)?,
            status: Status::Ok,
        },
    };
    emit(&rendered.text, out.as_deref())?;
    Ok(rendered.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("radiant: {e}");
            ExitCode::from(match e {
                CliError::Validation(_) => 2,
                CliError::Io(_) => 1,
            })
        }
    }
}
