//! `dircov`: directional coverage experiments from the command line.

mod output;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dircov_core::analyze::{make_table1, unit_slope_regression};
use dircov_core::bounds::{bound_report, harmonic_witness};
use dircov_core::estimate::estimate_worst_case;
use dircov_core::exact2d::classify_dim2;
use dircov_core::geometry::min_angle_exact;
use dircov_core::optimize::optimize_alphabet;
use dircov_core::parallel::{configured_threads, with_threads};
use dircov_core::{
    to_degrees, Alphabet, BoundReport, CoverageEstimate, Dim2Case, OptimizerConfig, RegressionReport, SampleSpec,
};

use output::{emit, sidecar_path, Run};

#[derive(Parser, Debug)]
#[command(name = "dircov", version, about = "Directional coverage of product codes over scalar alphabets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an alphabet JSON file for a named format.
    GenAlphabet(GenAlphabetArgs),
    /// Sampled worst-case angle of one alphabet at one dimension.
    Eval(EvalArgs),
    /// Worst-case angle table over several alphabets and dimensions (CSV).
    SweepDims(SweepArgs),
    /// Analytic bounds for an alphabet at one dimension.
    Bounds(BoundsArgs),
    /// Exact dimension-2 covering radius and classification.
    Classify2d(Classify2dArgs),
    /// Search for a sign-symmetric alphabet with small worst-case angle.
    Optimize(OptimizeArgs),
    /// Unit-slope log regression of an alphabet against a reference.
    Regress(RegressArgs),
    /// Run the built-in invariant checks at reduced scale.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Serialize)]
struct GenAlphabetArgs {
    /// e2m1, e1m2, e3m0, int4, any eXmY or intB, or power:R,m
    #[arg(long)]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    /// Format name or alphabet JSON file.
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    /// Format name or alphabet JSON file; repeat for several rows.
    #[arg(long = "alphabet", default_values_t = ["e2m1".to_string(), "e1m2".to_string(), "e3m0".to_string()])]
    alphabets: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Classify2dArgs {
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct OptimizeArgs {
    #[arg(long, default_value_t = 4)]
    bits: u32,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Alphabet JSON path; the report goes to `<stem>.report.json` beside it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 64)]
    pop: usize,
    #[arg(long, default_value_t = 150)]
    gens: usize,
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    #[arg(long, default_value_t = 1_000_000)]
    holdout_samples: u64,
    #[arg(long, default_value_t = 0.7)]
    weight: f64,
    #[arg(long, default_value_t = 0.9)]
    crossover: f64,
    #[arg(long, default_value_t = 1e-6)]
    powell_tol: f64,
    #[arg(long, default_value_t = 50)]
    powell_iters: usize,
}

#[derive(Args, Debug, Serialize)]
struct RegressArgs {
    #[arg(long)]
    alphabet: String,
    #[arg(long)]
    reference: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SelftestArgs {
    /// Also run the alphabet-specific checks on this format or file.
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Resolves a format name or an alphabet JSON file.
pub fn load_alphabet(spec: &str) -> Result<Alphabet> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {spec}"))?;
        return Alphabet::from_json(&text).with_context(|| format!("invalid alphabet file {spec}"));
    }
    if spec.ends_with(".json") || spec.contains(std::path::MAIN_SEPARATOR) {
        bail!("alphabet file {spec} does not exist");
    }
    Ok(Alphabet::from_format(spec)?)
}

#[derive(Serialize)]
struct EvalOutput {
    #[serde(flatten)]
    estimate: CoverageEstimate,
    max_angle_deg: f64,
}

#[derive(Serialize)]
struct BoundsOutput {
    alphabet: String,
    bit_width: u32,
    #[serde(flatten)]
    report: BoundReport,
    lower_bound_deg: f64,
    /// Exact nearest-codeword angle of the harmonic witness.
    witness_angle: Option<f64>,
    witness_angle_deg: Option<f64>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    alphabet: String,
    case: Dim2Case,
    f2_value: f64,
    f2_deg: f64,
    sph_value: f64,
    sph_deg: f64,
}

#[derive(Serialize)]
struct RegressOutput {
    alphabet: String,
    reference: String,
    #[serde(flatten)]
    report: RegressionReport,
}

#[derive(Serialize)]
struct OptimizeReport {
    config: OptimizerConfig,
    objective: f64,
    objective_deg: f64,
    de_objective: f64,
    de_objective_deg: f64,
    powell_iterations: usize,
    history: Vec<(usize, f64)>,
    holdout: CoverageEstimate,
    holdout_deg: f64,
    levels: Vec<f64>,
}

fn gen_alphabet(args: &GenAlphabetArgs) -> Result<()> {
    let run = Run::start("gen-alphabet", args, None)?;
    let a = Alphabet::from_format(&args.format)?;
    emit(&run.json(&a)?, args.out.as_deref())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let run = Run::start("eval", args, Some(args.seed))?;
    let a = load_alphabet(&args.alphabet)?;
    let estimate = estimate_worst_case(&a, SampleSpec::new(args.dim, args.samples, args.seed)?)?;
    let max_angle_deg = estimate.max_angle_deg();
    emit(&run.json(&EvalOutput { estimate, max_angle_deg })?, args.out.as_deref())
}

fn sweep_dims(args: &SweepArgs) -> Result<()> {
    let run = Run::start("sweep-dims", args, Some(args.seed))?;
    let alphabets = args.alphabets.iter().map(|s| load_alphabet(s)).collect::<Result<Vec<_>>>()?;
    let mut estimates = Vec::new();
    for a in &alphabets {
        for &d in &args.dims {
            estimates.push(estimate_worst_case(a, SampleSpec::new(d, args.samples, args.seed)?)?);
        }
    }
    emit(&run.csv(&make_table1(&estimates)?)?, args.out.as_deref())
}

fn bounds(args: &BoundsArgs) -> Result<()> {
    let run = Run::start("bounds", args, None)?;
    let a = load_alphabet(&args.alphabet)?;
    let report = bound_report(&a, args.dim)?;
    let witness_angle = if a.is_mixed_sign() {
        Some(min_angle_exact(&harmonic_witness(args.dim)?, &a)?.angle)
    } else {
        None
    };
    let out = BoundsOutput {
        alphabet: a.name().to_string(),
        bit_width: a.bit_width(),
        report,
        lower_bound_deg: to_degrees(report.lower_bound_angle),
        witness_angle,
        witness_angle_deg: witness_angle.map(to_degrees),
    };
    emit(&run.json(&out)?, args.out.as_deref())
}

fn classify2d(args: &Classify2dArgs) -> Result<()> {
    let run = Run::start("classify2d", args, None)?;
    let a = load_alphabet(&args.alphabet)?;
    let c = classify_dim2(&a)?;
    let out = ClassifyOutput {
        alphabet: a.name().to_string(),
        case: c.case,
        f2_value: c.f2_value,
        f2_deg: to_degrees(c.f2_value),
        sph_value: c.sph_value,
        sph_deg: to_degrees(c.sph_value),
    };
    emit(&run.json(&out)?, args.out.as_deref())
}

fn optimize(args: &OptimizeArgs) -> Result<()> {
    let run = Run::start("optimize", args, Some(args.seed))?;
    let config = OptimizerConfig {
        bit_width: args.bits,
        population: args.pop,
        de_generations: args.gens,
        eval_samples: args.samples,
        holdout_samples: args.holdout_samples,
        de_weight: args.weight,
        de_crossover: args.crossover,
        powell_tolerance: args.powell_tol,
        powell_max_iterations: args.powell_iters,
        ..OptimizerConfig::new(args.dim, args.seed)
    };
    let r = optimize_alphabet(&config)?;
    let report = OptimizeReport {
        config,
        objective: r.objective,
        objective_deg: to_degrees(r.objective),
        de_objective: r.de_objective,
        de_objective_deg: to_degrees(r.de_objective),
        powell_iterations: r.powell_iterations,
        history: r.history,
        holdout_deg: r.holdout.max_angle_deg(),
        holdout: r.holdout,
        levels: r.alphabet.positive_values().to_vec(),
    };
    emit(&run.json(&r.alphabet)?, Some(&args.out))?;
    emit(&run.json(&report)?, Some(&sidecar_path(&args.out)))
}

fn regress(args: &RegressArgs) -> Result<()> {
    let run = Run::start("regress", args, None)?;
    let a = load_alphabet(&args.alphabet)?;
    let reference = load_alphabet(&args.reference)?;
    let report = unit_slope_regression(&a, &reference)?;
    let out = RegressOutput { alphabet: a.name().to_string(), reference: reference.name().to_string(), report };
    emit(&run.json(&out)?, args.out.as_deref())
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::GenAlphabet(a) => gen_alphabet(a),
        Command::Eval(a) => eval(a),
        Command::SweepDims(a) => sweep_dims(a),
        Command::Bounds(a) => bounds(a),
        Command::Classify2d(a) => classify2d(a),
        Command::Optimize(a) => optimize(a),
        Command::Regress(a) => regress(a),
        Command::Selftest(a) => selftest::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(configured_threads(), || dispatch(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
