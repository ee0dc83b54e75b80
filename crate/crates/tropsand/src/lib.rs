//! Command line front end for `tropsand-core`: flag parsing, file formats
//! and the six experiment subcommands.

pub mod commands;
pub mod error;
pub mod formats;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "tropsand", version, about = "Sandpiles on lattice polygons and their tropical limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Relax the maximal stable state plus one grain per point at scale N.
    Relax(RelaxArgs),
    /// Minimal tropical polynomial through the points and its curve.
    Tropical(TropicalArgs),
    /// Compare rescaled odometers with the tropical limit across scales.
    Compare(CompareArgs),
    /// Send waves into a (p,q)-cylinder and extract the moving pattern.
    Soliton(SolitonArgs),
    /// Smooth a unimodular corner function until it is superharmonic.
    SmoothCorner(CornerArgs),
    /// Measure how far the moving pattern travels per wave.
    WaveSpeed(WaveSpeedArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output directory, created when missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Record wall-clock time in the report. Makes the report nondeterministic.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PolygonArgs {
    /// JSON file with {"vertices": [[x, y], ...]}; coordinates may be "a/b" strings.
    #[arg(long)]
    pub polygon: PathBuf,
    /// Points as "x,y;x,y" with rational coordinates.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub points: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleArg {
    Fifo,
    Lifo,
    Random,
    Generations,
}

#[derive(Args, Debug, Clone)]
pub struct RelaxArgs {
    #[command(flatten)]
    pub input: PolygonArgs,
    #[arg(long, default_value_t = 100)]
    pub scale: u32,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Fifo)]
    pub schedule: ScheduleArg,
    /// Seed of the random schedule. Ignored by the other schedules.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Toppling budget.
    #[arg(long)]
    pub budget: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct TropicalArgs {
    #[command(flatten)]
    pub input: PolygonArgs,
    /// Budget of tropical steps for the point operators.
    #[arg(long)]
    pub budget: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: PolygonArgs,
    /// Strictly increasing scales, at least two.
    #[arg(long, default_value = "50,100,200")]
    pub scales: String,
    /// Width of the boundary strip left out of the Hausdorff distance.
    #[arg(long)]
    pub strip: Option<f64>,
    /// Exit with status 3 unless the sup-error strictly decreases.
    #[arg(long)]
    pub assert: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SolitonArgs {
    /// Primitive direction "p,q" of the cylinder.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: String,
    /// Upper bound on the number of waves.
    #[arg(long, default_value_t = 400)]
    pub waves: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct CornerArgs {
    /// Six integers "p0,q0,p1,q1,p2,q2" with p1·q2 − p2·q1 = 1.
    #[arg(long, allow_hyphen_values = true)]
    pub corner: String,
    #[arg(long, default_value_t = 20)]
    pub radius: i64,
    /// Round budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Exit with status 3 unless the run settles with at least one defect.
    #[arg(long)]
    pub assert: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct WaveSpeedArgs {
    /// Primitive direction "α,β".
    #[arg(long, allow_hyphen_values = true)]
    pub direction: String,
    /// Number of measured waves M.
    #[arg(long, default_value_t = 100)]
    pub waves: u64,
    /// Exit with status 3 if the displacement is off by more than one level.
    #[arg(long)]
    pub assert: bool,
    #[command(flatten)]
    pub common: Common,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Relax(a) => commands::relax(&a),
        Command::Tropical(a) => commands::tropical(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Soliton(a) => commands::soliton(&a),
        Command::SmoothCorner(a) => commands::smooth_corner(&a),
        Command::WaveSpeed(a) => commands::wave_speed(&a),
    }
}
