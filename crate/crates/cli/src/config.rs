use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "covtime",
    version,
    about = "Covariant time observables and time-energy uncertainty bounds"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Energy grid size.
    #[arg(long, global = true, value_parser = parse_grid_size)]
    pub n: Option<usize>,
    /// Energy spacing; defaults to the balanced spacing √(2π/n).
    #[arg(long, global = true, value_parser = parse_positive)]
    pub de: Option<f64>,
    /// Finite-difference spacing of the Airy problem.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub h: Option<f64>,
    /// Length of the Airy domain [0, L].
    #[arg(long = "domain-l", visible_alias = "L", global = true, value_parser = parse_positive)]
    pub domain_l: Option<f64>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report file (directory for emit-fixtures), written atomically.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Multiplies every tolerance.
    #[arg(long, global = true, default_value_t = 1.0, value_parser = parse_positive)]
    pub tolerance_scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Airy spectrum, the constant d, both minimizations, and the inf identity.
    AiryCertify(CertifyArgs),
    /// Validates and dilates a POVM file.
    Dilate(DilateArgs),
    /// Checks the uncertainty bounds on a set of states.
    Bounds(BoundsArgs),
    /// Writes the canonical POVM fixtures and the minimal-state table.
    EmitFixtures,
}

impl Command {
    pub fn writes_report(&self) -> bool {
        !matches!(self, Command::EmitFixtures)
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Also write spectrum.tsv and minimal_state.tsv into this directory.
    #[arg(long)]
    pub tables: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DilateArgs {
    /// POVM document (JSON).
    pub path: PathBuf,
    /// Number of random bin sets for the compression check.
    #[arg(long, default_value_t = 100)]
    pub bin_sets: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = Model::Fullline)]
    pub model: Model,
    /// gaussian, minimal, combined, random:SEED or random:FIRST..LAST.
    #[arg(long, default_value = "gaussian")]
    pub states: StateSpec,
    #[arg(long, value_enum, default_value_t = BoundChoice::All)]
    pub bound: BoundChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Fullline,
    Halfline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundChoice {
    /// Every bound that applies to the model.
    All,
    TimeEnergy,
    PositiveEnergy,
    Combined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Gaussian,
    Minimal,
    Combined,
    Random { first: u64, last: u64 },
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => return Ok(StateSpec::Gaussian),
            "minimal" => return Ok(StateSpec::Minimal),
            "combined" => return Ok(StateSpec::Combined),
            _ => {}
        }
        let seeds = s
            .strip_prefix("random:")
            .ok_or_else(|| format!("unknown state set `{s}`; use gaussian, minimal, combined or random:A..B"))?;
        let parse = |t: &str| t.parse::<u64>().map_err(|_| format!("`{t}` is not a seed"));
        let (first, last) = match seeds.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => (parse(seeds)?, parse(seeds)?),
        };
        if first > last {
            return Err(format!("empty seed range {first}..{last}"));
        }
        Ok(StateSpec::Random { first, last })
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn parse_grid_size(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("`{s}` is not a positive integer"))?;
    if v >= 4 {
        Ok(v)
    } else {
        Err(format!("grid size must be at least 4, got {v}"))
    }
}
