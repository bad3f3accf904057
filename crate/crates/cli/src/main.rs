//! `keo`: classify, invert, assemble and solve position-dependent-mass
//! kinetic energy operators from the command line.
//!
//! Exit status is 0 on success, 1 when the library rejects the input and 2
//! for malformed invocations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keo_core::{parse_rational, KeoClass, Rational, Stencil};

mod commands;
mod config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] keo_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io { .. } => 1,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.into())
            }
        }
    )*};
}

domain_from!(
    keo_core::ValidationErrors,
    keo_core::CatalogError,
    keo_core::ClassifyError,
    keo_core::ParseError,
    keo_core::DiscretizeError,
    keo_core::SpectrumError
);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Pathway {
    /// Weighted sum of ordered products.
    #[default]
    Terms,
    /// Symmetric kinetic term plus effective potential.
    Linear,
}

#[derive(Debug, Parser)]
#[command(name = "keo", version, about = "Position-dependent-mass kinetic energy operators")]
pub struct Cli {
    /// Output format.
    #[arg(long, short = 'f', value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// TOML file with default values for any flag; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Exact rational such as `-1/3`; decimals are refused.
fn exact(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|_| {
        if text.trim().parse::<f64>().is_ok() {
            format!("{text:?} is a float; an exact rational is required (e.g. -1/3)")
        } else {
            format!("{text:?} is not a rational (expected an integer or p/q, e.g. -1/3)")
        }
    })
}

fn class(text: &str) -> Result<KeoClass, String> {
    KeoClass::parse(text).ok_or_else(|| format!("unknown class {text:?}; expected vR, I, II or III"))
}

fn stencil(text: &str) -> Result<Stencil, String> {
    text.parse()
}

#[derive(Debug, Clone, Args)]
pub struct Point {
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub xi: Rational,
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub zeta: Rational,
}

/// An ordering given either by catalog name or as an expression.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog entry, e.g. `BDD`, `W`, `MB(-1/4)`, `vR(0,-1/2)`.
    #[arg(long)]
    pub name: Option<String>,
    /// Ordering expression, e.g. `1/4 * m^(-1/2) p m^(-1/2) p + ...`.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Discretization {
    /// Mass profile: `constant`, `lorentzian`, `gaussian` or `step`, with
    /// optional parameters such as `gaussian(lambda=1/2,sigma=0.5)`.
    #[arg(long, default_value = "lorentzian")]
    pub profile: String,
    /// Interior grid points.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// `staggered` (compact, default) or `central`.
    #[arg(long, value_parser = stencil, default_value = "staggered")]
    pub stencil: Stencil,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class labels and boundary flags of a (xi, zeta) point.
    Classify(Point),
    /// Linear ambiguity parameters (xi, zeta, eta) of an ordering.
    Params(Source),
    /// Representative ordering of a class for a (xi, zeta) point.
    Invert {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_parser = class)]
        class: KeoClass,
    },
    /// Image of a point under the theta duality.
    Dual(Point),
    /// Linear parameters of the literature orderings.
    Table1,
    /// Class labels over a rational grid of the allowed region.
    Region {
        /// Points per axis.
        #[arg(long, default_value_t = 201)]
        resolution: usize,
    },
    /// Finite-difference matrix of a kinetic operator.
    Assemble {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: Discretization,
        #[arg(long, value_enum, default_value_t = Pathway::Terms)]
        pathway: Pathway,
    },
    /// Term-versus-linear discrepancy at n and 2n for a set of orderings.
    Defect {
        /// Orderings to check (repeatable).
        #[arg(long = "name", default_values_t = ["ZK", "MM", "W", "LK", "Lal", "YY"].map(String::from))]
        names: Vec<String>,
        /// Mass profiles (repeatable).
        #[arg(long = "profile", default_values_t = ["lorentzian", "gaussian(lambda=1/2,sigma=1/2)", "step(lambda=1/2,sigma=1/2)"].map(String::from))]
        profiles: Vec<String>,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        xmin: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        xmax: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_parser = stencil, default_value = "staggered")]
        stencil: Stencil,
    },
    /// Lowest eigenvalues of kinetic plus potential energy.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: Discretization,
        /// `zero`, `constant(v0=..)`, `harmonic(k=..,x0=..)` or `linear(slope=..)`.
        #[arg(long, default_value = "zero")]
        potential: String,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Repeat on h/2 and h/4 and extrapolate.
        #[arg(long)]
        refine: bool,
    },
    /// Spectra of the von Roos and class I orderings on either side of a dual pair.
    Dualpair {
        #[arg(long, value_parser = exact, allow_hyphen_values = true)]
        xi: Rational,
        #[arg(long, value_parser = exact, allow_hyphen_values = true)]
        theta: Rational,
        #[command(flatten)]
        grid: Discretization,
        #[arg(long, default_value = "zero")]
        potential: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let args = config::merge(args)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return Err(CliError::Usage(first_line(&e.to_string()))),
        Err(e) => {
            // --help and --version
            print!("{e}");
            return Ok(());
        }
    };
    let text = commands::execute(&cli.command, cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Clap's message without the usage block, on one line.
fn first_line(message: &str) -> String {
    let text = message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
        .collect::<Vec<_>>()
        .join(" ");
    text.trim_start_matches("error: ").to_string()
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().replace('\n', "; ");
            eprintln!("keo: {message}");
            ExitCode::from(e.exit_code())
        }
    }
}
