//! `uqsd`: decompositions of rank-two mixed states, their discrimination
//! figures of merit, and the optical discrimination circuit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod output;
mod record;

#[derive(Parser, Debug)]
#[command(name = "uqsd", version, about, propagate_version = true)]
struct Cli {
    /// Read every angle argument in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the |γ|-decomposition of diag(λ1, 1−λ1) and its figures of merit.
    Decompose(DecomposeArgs),
    /// Priors, overlap, p_s and p_e along |γ|² ∈ [0, 1].
    SweepGamma(SweepGammaArgs),
    /// Discrimination regime and p_s over the (|γ|², λ1) plane.
    RegionMap(RegionMapArgs),
    /// Optimal circuit settings, detector statistics and a Monte Carlo run.
    Optics(OpticsArgs),
    /// p_s(x) and the path-2 probabilities along x ∈ [0, α].
    SweepX(SweepXArgs),
    /// Signal-photon state heralded from the two-photon source.
    SpdcPrepare(SpdcArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; tabular commands print CSV to stdout without it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    lambda1: f64,
    #[arg(long)]
    gamma_sq: f64,
    /// Phase of γ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepGammaArgs {
    #[arg(long)]
    lambda1: f64,
    #[arg(long, default_value_t = 1001)]
    steps: usize,
    #[command(flatten)]
    output: Output,
    /// Also draw the curves as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RegionMapArgs {
    /// Grid resolution: |γ|² = i/steps, λ1 = j/steps.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OpticsArgs {
    /// Angle between the two polarization states.
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p1: f64,
    /// WP2 angle φ′ [default: π/2].
    #[arg(long, allow_negative_numbers = true)]
    varphi: Option<f64>,
    /// Evaluate this asymmetry angle instead of the optimal one.
    #[arg(long)]
    x: Option<f64>,
    /// Monte Carlo trials; 0 skips the experiment.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepXArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p1: f64,
    /// WP2 angle φ′ [default: π/2].
    #[arg(long, allow_negative_numbers = true)]
    varphi: Option<f64>,
    #[arg(long, default_value_t = 1001)]
    steps: usize,
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpdcArgs {
    #[arg(long)]
    lambda1: f64,
    #[command(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let angle = |v: f64| if cli.degrees { v.to_radians() } else { v };
    let result = match cli.command {
        Command::Decompose(a) => commands::decompose(
            a.lambda1,
            a.gamma_sq,
            angle(a.theta),
            a.output.out.as_deref(),
        ),
        Command::SweepGamma(a) => commands::sweep_gamma(
            a.lambda1,
            a.steps,
            a.output.out.as_deref(),
            a.svg.as_deref(),
        ),
        Command::RegionMap(a) => {
            commands::region_map(a.steps, a.output.out.as_deref(), a.svg.as_deref())
        }
        Command::Optics(a) => commands::optics(&commands::OpticsInput {
            alpha: angle(a.alpha),
            p1: a.p1,
            varphi: a.varphi.map_or(std::f64::consts::FRAC_PI_2, angle),
            x: a.x.map(angle),
            trials: a.trials,
            seed: a.seed,
            out: a.output.out,
        }),
        Command::SweepX(a) => commands::sweep_x(
            angle(a.alpha),
            a.p1,
            a.varphi.map_or(std::f64::consts::FRAC_PI_2, angle),
            a.steps,
            a.output.out.as_deref(),
            a.svg.as_deref(),
        ),
        Command::SpdcPrepare(a) => commands::spdc_prepare(a.lambda1, a.output.out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
