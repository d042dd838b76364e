//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use erasure_bounds::{DistortionMethod, RateMethod};

#[derive(Parser, Debug)]
#[command(
    name = "erasure-bounds",
    version,
    about = "Rate-allocation bounds and packet planning for erasure channels",
    after_help = "Exit codes: 0 success, 2 invalid arguments, 3 numeric failure, 4 verification failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the expurgated, sphere-packing and straight-line exponents
    /// over a range of code rates.
    Exponents(ExponentsArgs),
    /// Rate bounds r_ex and r_sl for a bit-erasure channel.
    Bounds(BoundsArgs),
    /// Rate bounds for a packet-erasure channel via its equivalent bit channel.
    PacketBounds(PacketBoundsArgs),
    /// Scan packet sizes against an end-to-end distortion limit.
    PacketPlan(PacketPlanArgs),
    /// Sweep rate bounds over erasure probabilities and packet sizes.
    Sweep(SweepArgs),
    /// Re-derive the closed forms from brute-force oracles and report
    /// per-group deviations.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the generation time (unix seconds) in the metadata; off by
    /// default so identical inputs give byte-identical output.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Args, Debug)]
pub struct ExponentsArgs {
    /// Bit-erasure probability.
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub r_max: f64,
    /// Number of evenly spaced rates, endpoints included.
    #[arg(long, default_value_t = 19)]
    pub steps: u32,
    /// Also render the exponent curves to this SVG file.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Bit-erasure probability.
    #[arg(long)]
    pub epsilon: f64,
    /// Source vector dimension.
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    /// Power of the distortion measure.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Variant used for the lower-bound rate.
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PacketBoundsArgs {
    /// Packet-erasure probability.
    #[arg(long)]
    pub delta: f64,
    /// Packet size in bits.
    #[arg(long)]
    pub packet_size: u32,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PacketPlanArgs {
    /// Packet-erasure probability.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// Channel bits per source component (R).
    #[arg(long, default_value_t = 10.0)]
    pub transmission_rate: f64,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Largest acceptable optimized total distortion; omit to tabulate the
    /// whole packet-size range with no target.
    #[arg(long)]
    pub max_distortion: Option<f64>,
    /// Largest packet size scanned.
    #[arg(long, default_value_t = 1000)]
    pub p_max: u32,
    /// Rate driving the planned distortion.
    #[arg(long, value_enum, default_value_t = PlanMethodArg::Exact)]
    pub method: PlanMethodArg,
    /// Also render distortion versus packet size to this SVG file.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Smallest erasure probability (per packet for sizes > 1).
    #[arg(long, default_value_t = 1e-6)]
    pub prob_min: f64,
    /// Largest erasure probability.
    #[arg(long, default_value_t = 0.1)]
    pub prob_max: f64,
    /// Number of probability samples.
    #[arg(long, default_value_t = 13)]
    pub points: u32,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    /// Packet sizes, one curve pair per size.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    pub packet_sizes: Vec<u32>,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    /// Also render the rate-bound curves to this SVG file.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Bias the named group's deviations past tolerance to prove the harness
    /// catches violations (the run then fails with exit code 4).
    #[arg(long, value_name = "GROUP")]
    pub inject_fault: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Exact,
    Simplified,
    Asymptotic,
}

impl MethodArg {
    pub fn to_core(self) -> RateMethod {
        match self {
            MethodArg::Exact => RateMethod::Exact,
            MethodArg::Simplified => RateMethod::Simplified,
            MethodArg::Asymptotic => RateMethod::Asymptotic,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMethodArg {
    Exact,
    Simplified,
    Asymptotic,
    StraightLine,
}

impl PlanMethodArg {
    pub fn to_core(self) -> DistortionMethod {
        match self {
            PlanMethodArg::Exact => DistortionMethod::Expurgated(RateMethod::Exact),
            PlanMethodArg::Simplified => DistortionMethod::Expurgated(RateMethod::Simplified),
            PlanMethodArg::Asymptotic => DistortionMethod::Expurgated(RateMethod::Asymptotic),
            PlanMethodArg::StraightLine => DistortionMethod::StraightLine,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PlanMethodArg::Exact => "exact",
            PlanMethodArg::Simplified => "simplified",
            PlanMethodArg::Asymptotic => "asymptotic",
            PlanMethodArg::StraightLine => "straight-line",
        }
    }
}
