//! `segre`: classify points of real algebraic sets by grid detection, scan
//! regions, and compute decompositions and invariants.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{IdealSource, TableFormat};
use config::SearchArgs;

/// Malformed input (usage, parse or validation errors).
const EXIT_USAGE: u8 = 64;
/// The point is not on X within the tolerance.
const EXIT_NOT_ON_SET: u8 = 65;

#[derive(Debug, Parser)]
#[command(name = "segre", version, about = "Grid detection of complex analytic germs in real algebraic sets")]
struct Cli {
    /// TOML file with search settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a point of X as IN, OUT or UNDECIDED (exit code 0, 1, 2)
    Classify {
        /// Defining polynomial (JSON).
        #[arg(long)]
        rho: PathBuf,
        /// 2n comma-separated values, re and im per coordinate; a/b allowed.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Plane through the point to certify exactly before searching.
        #[arg(long)]
        plane: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },

    /// Classify every lattice point of a box
    Scan {
        #[arg(long)]
        rho: PathBuf,
        /// 2n axis specs: "lo:hi", a fixed value, or "~guess" for the solved axis.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        /// Lattice spacing.
        #[arg(long)]
        resolution: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Output file; the manifest goes next to it as FILE.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },

    /// Holomorphic decomposition 4ρ = 2 Re h + Σ|f|² − Σ|g|²
    Decompose {
        #[arg(long)]
        rho: PathBuf,
        /// Expand about this point instead of the file's center.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value = "1/2")]
        t: String,
        /// Comma-separated positive rationals; all 1 by default.
        #[arg(long)]
        delta: Option<String>,
    },

    /// Lower bound for the type of X at a point
    Type {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 3)]
        max_curve_degree: u32,
        /// Coefficients tried per component of a monomial curve (2..=10).
        #[arg(long, default_value_t = 3)]
        budget: usize,
        /// Extra candidate curves (JSON), anchored at the point.
        #[arg(long)]
        curve: Vec<PathBuf>,
    },

    /// τ*, K and D of a monomial ideal
    Invariants {
        /// Ideal as JSON {"n": .., "generators": [[..], ..]}.
        #[arg(long)]
        ideal: Option<PathBuf>,
        /// Generators as exponent lists, e.g. "2,0;0,3".
        #[arg(long)]
        generators: Option<String>,
        /// Use the ideal of h and f − g from the decomposition of this polynomial.
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value = "1/2")]
        t: String,
        #[arg(long)]
        delta: Option<String>,
    },

    /// Check a grid file against conditions (a) and (b) (exit 0 if it passes, 1 if not)
    VerifyGrid {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        /// 0 means exact zero tests.
        #[arg(long, default_value = "0")]
        tol: String,
    },

    /// Hausdorff distance between two point clouds (CSV)
    Hausdorff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Classify { rho, point, plane, search } => {
            Ok(commands::classify(&rho, &point, plane.as_deref(), &search, config)?.exit_code() as u8)
        }
        Command::Scan { rho, bx, resolution, search, out, format } => {
            commands::scan(&rho, &bx, &resolution, &search, out.as_deref(), format, config)?;
            Ok(0)
        }
        Command::Decompose { rho, point, t, delta } => {
            commands::decompose(&rho, point.as_deref(), &t, delta.as_deref())?;
            Ok(0)
        }
        Command::Type { rho, point, max_curve_degree, budget, curve } => {
            commands::type_bound(&rho, &point, max_curve_degree, budget, &curve)?;
            Ok(0)
        }
        Command::Invariants { ideal, generators, rho, point, t, delta } => {
            commands::invariants(IdealSource {
                ideal: ideal.as_deref(),
                generators: generators.as_deref(),
                rho: rho.as_deref(),
                point: point.as_deref(),
                t: &t,
                delta: delta.as_deref(),
            })?;
            Ok(0)
        }
        Command::VerifyGrid { rho, grid, tol } => Ok(if commands::verify(&rho, &grid, &tol)? { 0 } else { 1 }),
        Command::Hausdorff { a, b } => {
            commands::hausdorff(&a, &b)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let not_on_set =
                e.chain().any(|c| matches!(c.downcast_ref::<segre_core::Error>(), Some(segre_core::Error::NotOnSet { .. })));
            if not_on_set {
                eprintln!("error: point not on X within tol: {e:#}");
                ExitCode::from(EXIT_NOT_ON_SET)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
