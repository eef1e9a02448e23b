use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qam_core::means::parse_list;
use qam_core::{Interval64, SearchConfig};

/// Comma-separated list taken as one argument value.
pub type Reals = Vec<f64>;
pub type Counts = Vec<usize>;

#[derive(Debug, Parser)]
#[command(name = "qam", version, about = "Quasi-arithmetic means, their distance rho, and upper bounds on it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-arithmetic mean of a weighted sample.
    Mean(MeanArgs),
    /// Evaluate B_f at a point (x,y,z) and/or A_f = f''/f' at x.
    Op(OpArgs),
    /// Norms of A_f, A_f - A_g, f - g and B_f - B_g.
    Norm(NormArgs),
    /// All four upper bounds on rho(f, g) checked against a searched lower bound.
    Bounds(PairArgs),
    /// Searched lower bound on rho(f, g).
    Rho(PairArgs),
    /// Reproduce the sine-family examples f_n = x + sin(nx)/n^2 on [0, 2pi].
    Example(ExampleArgs),
    /// B deviations and rho lower bounds of a generator sequence against its limit.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Generator spec, e.g. `power:2`, `sine:4`, `affine:3,-1:log`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub spec: String,

    /// Domain of the generators and the interval U, as `lo,hi` (`2pi` accepted).
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub interval: Interval64,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[command(flatten)]
    pub gen: GenArgs,

    /// Sample points.
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    pub a: Reals,

    /// Positive weights summing to 1 within 1e-6; uniform when omitted.
    #[arg(long, value_parser = parse_reals)]
    pub w: Option<Reals>,
}

#[derive(Debug, Args)]
pub struct OpArgs {
    #[command(flatten)]
    pub gen: GenArgs,

    /// Point `x,y,z` at which to evaluate B_f.
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    pub point: Option<Reals>,

    /// Abscissa at which to evaluate A_f.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormChoice {
    L1,
    Osc,
    Sup,
    InfDeriv,
    SupBDiff,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub gen: GenArgs,

    /// Second generator; switches the targets to differences.
    #[arg(long, value_name = "SPEC")]
    pub gen2: Option<String>,

    /// Norms to compute (repeatable); every applicable one when omitted.
    #[arg(long, value_enum)]
    pub kind: Vec<NormChoice>,

    /// Separation alpha for `sup-b-diff`.
    #[arg(long, value_parser = parse_real)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Seed of the random-restart phase.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sample sizes searched, e.g. `2,3`.
    #[arg(long, value_parser = parse_counts)]
    pub n_points: Option<Counts>,

    /// Axis grid size for two-point samples.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Coordinate-descent rounds.
    #[arg(long)]
    pub rounds: Option<usize>,

    /// Random starting samples per sample size.
    #[arg(long)]
    pub restarts: Option<usize>,
}

impl SearchArgs {
    pub fn config(&self, base: SearchConfig) -> SearchConfig {
        SearchConfig {
            n_points: self.n_points.clone().unwrap_or(base.n_points),
            grid_per_axis: self.grid.unwrap_or(base.grid_per_axis),
            refine_rounds: self.rounds.unwrap_or(base.refine_rounds),
            seed: self.seed,
            random_restarts: self.restarts.unwrap_or(base.random_restarts),
        }
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub gen: GenArgs,

    #[arg(long, value_name = "SPEC")]
    pub gen2: String,

    /// Evaluate each bound for the given ordering only.
    #[arg(long)]
    pub no_symmetrize: bool,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// 1 (sup distance, Cargo-Shisha and L1 bounds) or 2 (oscillation bound).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,

    /// Inclusive range of n, within 2..64.
    #[arg(long, value_parser = parse_n_range, default_value = "2..16")]
    pub n_range: RangeInclusive<u32>,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `sine:n`, converging to the identity.
    Sine,
    /// `power:1+1/n`, converging to the identity.
    Power,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Built-in sequence.
    #[arg(long, value_enum, conflicts_with = "seq", required_unless_present = "seq")]
    pub family: Option<Family>,

    /// Explicit sequence of generator specs separated by `;`.
    #[arg(long, requires = "gen")]
    pub seq: Option<String>,

    /// Limit generator for `--seq`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub gen: Option<String>,

    /// Interval; defaults to [0, 2pi] for `sine` and [1, 4] for `power`.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub interval: Option<Interval64>,

    /// Inclusive range of n for `--family`.
    #[arg(long, value_parser = parse_n_range, default_value = "2..8")]
    pub n_range: RangeInclusive<u32>,

    /// B grid size; pairs need |x - z| >= |U| / grid.
    #[arg(long, default_value_t = 32)]
    pub b_grid: usize,

    #[command(flatten)]
    pub search: SearchArgs,
}

fn parse_interval(s: &str) -> Result<Interval64, String> {
    s.parse().map_err(|e: qam_core::QamError| e.to_string())
}

fn parse_reals(s: &str) -> Result<Reals, String> {
    parse_list(s).map_err(|e| e.to_string())
}

fn parse_real(s: &str) -> Result<f64, String> {
    qam_core::generators::parse_real(s).map_err(|e| e.to_string())
}

fn parse_counts(s: &str) -> Result<Counts, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a count")))
        .collect()
}

/// `a..b`, inclusive at both ends, with `2 <= a <= b <= 64`.
pub fn parse_n_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("`{s}` is not `a..b`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("`{t}` is not an integer"));
    let (a, b) = (parse(a)?, parse(b)?);
    if !(2 <= a && a <= b && b <= 64) {
        return Err(format!("n range {a}..{b} must satisfy 2 <= a <= b <= 64"));
    }
    Ok(a..=b)
}
