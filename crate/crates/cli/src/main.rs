//! `holonorm`: run normality certifiers from the command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "holonorm",
    version,
    about = "Numeric certifiers for normal holomorphic functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Spherical derivative f^# at a point.
    Sharp,
    /// μ(f) = 2|f'|/(1+|f|²) at a point, continued across poles (one variable).
    Mu,
    /// Sup of f^# over a family on a compact grid.
    Marty,
    /// Yosida / Lehto–Virtanen ladder test on the disc (one variable).
    Yosida,
    /// Levi form over the Bergman metric of the ball, sampled.
    BallRatio,
    /// Ladder test of the Levi form over the Kobayashi metric of the ball.
    Kobayashi,
    /// Sup of (1-|λ|²) g^# over random analytic discs g = f∘φ.
    DiscProbe,
    /// Line tests through the origin for a function or a family.
    Linescan,
    /// Hartogs convergence test for a power series.
    Hartogs,
    /// Marty sup over automorphism translates of f.
    Orbit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sharp => "sharp",
            Command::Mu => "mu",
            Command::Marty => "marty",
            Command::Yosida => "yosida",
            Command::BallRatio => "ball-ratio",
            Command::Kobayashi => "kobayashi",
            Command::DiscProbe => "disc-probe",
            Command::Linescan => "linescan",
            Command::Hartogs => "hartogs",
            Command::Orbit => "orbit",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Opts {
    /// Expression in z1..zn; repeat for a family.
    #[arg(long, global = true)]
    pub expr: Vec<String>,
    /// Power series JSON file.
    #[arg(long, global = true)]
    pub series: Option<PathBuf>,
    /// Number of variables; inferred from the expressions when omitted.
    #[arg(long, global = true)]
    pub arity: Option<usize>,
    /// Family template with `{j}` replaced by 1..=count, e.g. "{j}*z1".
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true, default_value_t = 10)]
    pub count: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 64)]
    pub radii: usize,
    #[arg(long, global = true, default_value_t = 128)]
    pub angles: usize,
    /// Unit phases per direction on ball grids.
    #[arg(long, global = true, default_value_t = 8)]
    pub phases: usize,
    #[arg(long, global = true, default_value = "0.2,0.1,0.05,0.02,0.01")]
    pub ladder: String,
    #[arg(long, global = true, default_value_t = 128)]
    pub directions: usize,
    #[arg(long, global = true, default_value_t = holonorm::linescan::DEFAULT_RMIN)]
    pub rmin: f64,
    /// Point as "re,im;re,im;..." (default: origin).
    #[arg(long, global = true)]
    pub point: Option<String>,
    /// Radius of the compact grid for marty and orbit.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub radius: f64,
    /// Base points for ball-ratio; pairs for the Lipschitz probe.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Tangent vectors per point; 0 uses the exact supremum over all vectors.
    #[arg(long, global = true, default_value_t = 0)]
    pub vectors: usize,
    #[arg(long, global = true, default_value_t = 200)]
    pub discs: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: usize,
    #[arg(long = "orbit-size", global = true, default_value_t = 20)]
    pub orbit_size: usize,
    /// Label the yosida report as the Lehto–Virtanen normal-function test.
    #[arg(long = "normal-function", global = true)]
    pub normal_function: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
