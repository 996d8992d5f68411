//! `steklov`: spectra, verifications, scans and bounds from the command line.
//!
//! Exit status is 0 on success, 1 for domain errors and failed verifications,
//! and 2 for usage errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steklov_core::annulus_pencil::Problem;
use steklov_core::{Precision, Real};

use output::Format;

/// Environment variable holding the default precision in decimal digits.
pub const PRECISION_ENV: &str = "STEKLOV_PRECISION";

#[derive(Parser, Debug)]
#[command(
    name = "steklov",
    version,
    about = "Fourth-order Steklov spectra on annuli, balls and cylinders"
)]
struct Cli {
    /// Significant decimal digits of the reported values.
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 50,
          value_parser = clap::value_parser!(u32).range(30..=10_000))]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ordered eigenvalues with multiplicities.
    Spectrum(SpectrumArgs),
    /// Run a check suite and report pass or fail.
    #[command(subcommand)]
    Verify(Verify),
    /// Tabulate a quantity along a parameter grid.
    #[command(subcommand)]
    Scan(Scan),
    /// Evaluate an eigenvalue bound.
    #[command(subcommand)]
    Bound(Bound),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Type1,
    Type2,
}

impl ProblemArg {
    pub fn get(self) -> Problem {
        match self {
            ProblemArg::Type1 => Problem::Type1,
            ProblemArg::Type2 => Problem::Type2,
        }
    }
}

/// `None` means both problems.
pub fn problems(p: Option<ProblemArg>) -> Vec<Problem> {
    match p {
        Some(p) => vec![p.get()],
        None => vec![Problem::Type1, Problem::Type2],
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Annulus,
    Ball,
    Cylinder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossSectionArg {
    Sphere { m: u32, radius: String },
    Torus { m: u32, radius: String },
}

fn parse_cross_section(s: &str) -> Result<CrossSectionArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err("expected sphere:m[:r] or torus:m[:r]".into());
    }
    let m: u32 = parts[1].parse().map_err(|_| format!("bad dimension {:?}", parts[1]))?;
    if m == 0 {
        return Err("cross-section dimension must be at least 1".into());
    }
    let radius = parts.get(2).unwrap_or(&"1").to_string();
    radius.parse::<f64>().map_err(|_| format!("bad radius {radius:?}"))?;
    match parts[0] {
        "sphere" => Ok(CrossSectionArg::Sphere { m, radius }),
        "torus" => Ok(CrossSectionArg::Torus { m, radius }),
        other => Err(format!("unknown cross-section {other:?}")),
    }
}

/// `a:b:steps`, `steps` points from `a` to `b` inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub start: String,
    pub end: String,
    pub steps: usize,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err("expected a:b:steps".into());
    };
    for x in [a, b] {
        x.parse::<f64>().map_err(|_| format!("bad grid end {x:?}"))?;
    }
    let steps: usize = n.parse().map_err(|_| format!("bad step count {n:?}"))?;
    if steps == 0 {
        return Err("empty grid".into());
    }
    if steps == 1 && a != b {
        return Err("a single-point grid needs a = b".into());
    }
    Ok(Grid {
        start: a.into(),
        end: b.into(),
        steps,
    })
}

fn parse_number(s: &str) -> Result<String, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))?;
    Ok(s.to_string())
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Ambient dimension (annulus and ball).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: Option<u32>,
    /// Inner radius of the annulus.
    #[arg(long, value_parser = parse_number)]
    pub eps: Option<String>,
    /// Ball radius.
    #[arg(long, value_parser = parse_number, default_value = "1")]
    pub radius: String,
    #[arg(long, value_parser = parse_number)]
    pub half_length: Option<String>,
    /// `sphere:m[:r]` or `torus:m[:r]`.
    #[arg(long, value_parser = parse_cross_section)]
    pub cross_section: Option<CrossSectionArg>,
    /// Largest spherical-harmonic degree enumerated.
    #[arg(long, default_value_t = 10)]
    pub kmax: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Expansions as published, case by case.
    Published,
    /// The generic Type 1 coefficient for every degree.
    Generic,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Fitted remainder orders of the small-hole expansions.
    Asymptotics(AsymptoticsArgs),
    /// Pencil roots against the shooting solver.
    Oracle(OracleArgs),
    /// Convergence of cylinder eigenvalues to their long-cylinder limits.
    Limits(LimitsArgs),
    /// Signs of the normalized annulus-minus-ball differences.
    Inequalities(InequalitiesArgs),
    /// Ball equality and weak-versus-sharp ordering of the Type 3 bound.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..), requires = "k")]
    pub dim: Option<u32>,
    #[arg(long, requires = "dim")]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub branch: u8,
    #[arg(long, value_parser = parse_number, default_value = "1e-2")]
    pub eps1: String,
    #[arg(long, value_parser = parse_number, default_value = "1e-3")]
    pub eps2: String,
    /// Allowed distance between fitted and declared order.
    #[arg(long, default_value_t = 0.5)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::Published)]
    pub model: ModelArg,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 5],
          value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: Vec<u32>,
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    #[arg(long, value_delimiter = ',', value_parser = parse_number,
          default_values_t = ["0.2".to_string(), "0.5".to_string(), "0.8".to_string()])]
    pub eps: Vec<String>,
    #[arg(long, value_parser = parse_number, default_value = "1e-20")]
    pub tol: String,
    /// Taylor steps across the annulus.
    #[arg(long, default_value_t = 2048)]
    pub steps: usize,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    /// Check the cylinder families against their long-cylinder limits.
    #[arg(long, default_value_t = true)]
    pub cylinder: bool,
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
    /// Half-lengths.
    #[arg(long = "L", value_delimiter = ',', value_parser = parse_number,
          default_values_t = ["2".to_string(), "4".to_string(), "8".to_string(), "16".to_string()])]
    pub half_lengths: Vec<String>,
    /// Square root of the cross-section eigenvalue.
    #[arg(long, value_parser = parse_number, default_value = "1")]
    pub c: String,
}

#[derive(Args, Debug)]
pub struct InequalitiesArgs {
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
    /// Dimension; all of 2..=8 when omitted.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: Option<u32>,
    #[arg(long, value_parser = parse_number, default_value = "0.05")]
    pub eps: String,
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Accept holes above the validated ceiling.
    #[arg(long)]
    pub allow_outside: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Largest dimension checked.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..))]
    pub max_dim: u32,
    /// Random measure sets per dimension.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
enum Scan {
    /// Scale-invariant eigenvalue of `B_1 \ B_eps` against the unit ball.
    Normalized(ScanArgs),
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub branch: u8,
    /// `a:b:steps`.
    #[arg(long, value_parser = parse_grid)]
    pub eps_grid: Grid,
    /// Weight of the boundary-area factor; boundary area alone when omitted.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Bound {
    /// Sharp and weak bounds for the first Type 3 eigenvalue.
    Type3(Type3Args),
}

#[derive(Args, Debug)]
pub struct Type3Args {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    #[arg(long, value_parser = parse_number)]
    pub tau: String,
    #[arg(long, value_parser = parse_number)]
    pub volume: String,
    #[arg(long, value_parser = parse_number)]
    pub area: String,
    /// The domain is star-shaped and mean convex.
    #[arg(long)]
    pub assert_hypotheses: bool,
}

/// Failure of a command, mapped to the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad combination of arguments: exit 2.
    Usage(String),
    /// Domain error or a failed check: exit 1.
    Domain(String),
}

impl From<steklov_core::Error> for Failure {
    fn from(e: steklov_core::Error) -> Self {
        match e {
            steklov_core::Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Settings shared by every command.
pub struct Run {
    pub precision: Precision,
    pub format: Format,
    pub seed: u64,
}

impl Run {
    pub fn real(&self, s: &str) -> Result<Real, Failure> {
        Ok(Real::parse(s, self.precision)?)
    }

    pub fn full(&self, x: &Real) -> String {
        x.to_decimal(self.precision.digits())
    }
}

/// Rendered output and whether every check passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let ctx = Run {
        precision: Precision::new(cli.precision)?,
        format: cli.format,
        seed: cli.seed,
    };
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, &a),
        Command::Verify(Verify::Asymptotics(a)) => commands::verify_asymptotics(&ctx, &a),
        Command::Verify(Verify::Oracle(a)) => commands::verify_oracle(&ctx, &a),
        Command::Verify(Verify::Limits(a)) => commands::verify_limits(&ctx, &a),
        Command::Verify(Verify::Inequalities(a)) => commands::verify_inequalities(&ctx, &a),
        Command::Verify(Verify::Bounds(a)) => commands::verify_bounds(&ctx, &a),
        Command::Scan(Scan::Normalized(a)) => commands::scan_normalized(&ctx, &a),
        Command::Bound(Bound::Type3(a)) => commands::bound_type3(&ctx, &a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            if let Err(e) = output::emit(&out.text, path.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
