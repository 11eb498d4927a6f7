//! Search for sign-symmetric alphabets with small worst-case angle.
//!
//! Candidates are parametrized by `theta` with
//! `level_k = exp(theta_1) + ... + exp(theta_k)`, so every parameter vector
//! maps to strictly increasing positive levels. A differential-evolution
//! stage explores this space; Powell's method then polishes the best point.
//! Both stages score candidates on one frozen sample set.

pub mod de;
pub mod powell;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::estimate::{estimate_worst_case, CoverageEstimate, EvalSet, SampleSpec};

pub use de::{differential_evolution, DeOutcome, DeSettings};
pub use powell::{powell_minimize, PowellOutcome};

/// Largest supported bit width (31 free levels).
pub const MAX_OPT_BITS: u32 = 6;

const INIT_LOW: f64 = 0.5;
const INIT_HIGH: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub bit_width: u32,
    pub dimension: usize,
    pub population: usize,
    pub de_weight: f64,
    pub de_crossover: f64,
    pub de_generations: usize,
    pub de_seed: u64,
    pub eval_samples: u64,
    pub eval_seed: u64,
    pub holdout_samples: u64,
    pub holdout_seed: u64,
    pub powell_tolerance: f64,
    pub powell_max_iterations: usize,
}

impl OptimizerConfig {
    /// Default budgets at dimension `n`. The three streams use `seed`,
    /// `seed + 1` and `seed + 2`.
    pub fn new(dimension: usize, seed: u64) -> Self {
        Self {
            bit_width: 4,
            dimension,
            population: 64,
            de_weight: 0.7,
            de_crossover: 0.9,
            de_generations: 150,
            de_seed: seed,
            eval_samples: 20_000,
            eval_seed: seed.wrapping_add(1),
            holdout_samples: 1_000_000,
            holdout_seed: seed.wrapping_add(2),
            powell_tolerance: 1e-6,
            powell_max_iterations: 50,
        }
    }

    /// Number of free positive levels, `2^(b-1) - 1`.
    pub fn free_levels(&self) -> usize {
        (1usize << (self.bit_width - 1)) - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(2..=MAX_OPT_BITS).contains(&self.bit_width) {
            return bad(format!("bit_width must be in 2..={MAX_OPT_BITS}, got {}", self.bit_width));
        }
        if self.dimension < 2 {
            return bad(format!("dimension must be >= 2, got {}", self.dimension));
        }
        if self.population < 4 {
            return bad(format!("population must be >= 4, got {}", self.population));
        }
        if !(self.de_weight > 0.0 && self.de_weight <= 2.0) {
            return bad(format!("de_weight must be in (0, 2], got {}", self.de_weight));
        }
        if !(0.0..=1.0).contains(&self.de_crossover) {
            return bad(format!("de_crossover must be in [0, 1], got {}", self.de_crossover));
        }
        if self.eval_samples < 1 || self.holdout_samples < 1 {
            return bad("sample counts must be >= 1".into());
        }
        if !(self.powell_tolerance.is_finite() && self.powell_tolerance > 0.0) {
            return bad(format!("powell_tolerance must be positive, got {}", self.powell_tolerance));
        }
        Ok(())
    }

    pub fn eval_spec(&self) -> Result<SampleSpec> {
        SampleSpec::new(self.dimension, self.eval_samples, self.eval_seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Normalized so the smallest positive level is 1.
    pub alphabet: Alphabet,
    /// Worst-case angle on the evaluation set, radians.
    pub objective: f64,
    /// Best objective after the DE stage, radians.
    pub de_objective: f64,
    /// `(generation, best objective)` for the DE stage.
    pub history: Vec<(usize, f64)>,
    pub powell_iterations: usize,
    /// Re-score on the held-out stream.
    pub holdout: CoverageEstimate,
}

/// `level_k = sum_{j <= k} exp(theta_j)`.
pub fn levels_from_params(theta: &[f64]) -> Vec<f64> {
    theta
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t.exp();
            Some(*acc)
        })
        .collect()
}

/// Inverse of [`levels_from_params`] for strictly increasing positive levels.
pub fn params_from_levels(levels: &[f64]) -> Result<Vec<f64>> {
    check_levels(levels)?;
    let mut prev = 0.0;
    Ok(levels
        .iter()
        .map(|&l| {
            let t = (l - prev).ln();
            prev = l;
            t
        })
        .collect())
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Domain("no levels given".into()));
    }
    if levels.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Domain("levels must be positive and finite".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("levels must be strictly increasing".into()));
    }
    Ok(())
}

/// Worst-case angle of `{0} ∪ ±levels` over `eval`, radians.
pub fn objective(levels: &[f64], eval: &EvalSet) -> Result<f64> {
    check_levels(levels)?;
    eval.worst_angle(&Alphabet::from_positive_levels("candidate", levels)?)
}

/// Objective in parameter space. Levels that collide in floating point
/// score `+inf`.
fn param_objective(theta: &[f64], eval: &EvalSet) -> f64 {
    objective(&levels_from_params(theta), eval).unwrap_or(f64::INFINITY)
}

fn de_settings(config: &OptimizerConfig) -> DeSettings {
    DeSettings {
        population: config.population,
        weight: config.de_weight,
        crossover: config.de_crossover,
        generations: config.de_generations,
        init_low: INIT_LOW.ln(),
        init_high: INIT_HIGH.ln(),
        seed: config.de_seed,
    }
}

/// DE stage on the configured evaluation set. Returns the best levels and
/// the per-generation history.
pub fn run_de(config: &OptimizerConfig) -> Result<(Vec<f64>, Vec<(usize, f64)>)> {
    config.validate()?;
    let eval = EvalSet::generate(config.eval_spec()?)?;
    let out = run_de_on(config, &eval);
    Ok((levels_from_params(&out.best), out.history))
}

fn run_de_on(config: &OptimizerConfig, eval: &EvalSet) -> DeOutcome {
    differential_evolution(|t| param_objective(t, eval), config.free_levels(), &de_settings(config))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowellRefinement {
    pub levels: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Powell stage from `start` on a given evaluation set.
pub fn refine_powell_on(start: &[f64], config: &OptimizerConfig, eval: &EvalSet) -> Result<PowellRefinement> {
    let theta0 = params_from_levels(start)?;
    let out = powell_minimize(
        |t| param_objective(t, eval),
        &theta0,
        config.powell_tolerance,
        config.powell_max_iterations,
    );
    Ok(PowellRefinement { levels: levels_from_params(&out.x), objective: out.value, iterations: out.iterations })
}

/// Powell stage from `start` on the configured evaluation set.
pub fn refine_powell(start: &[f64], config: &OptimizerConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let eval = EvalSet::generate(config.eval_spec()?)?;
    Ok(refine_powell_on(start, config, &eval)?.levels)
}

/// Full pipeline: DE, Powell, normalization and held-out re-scoring.
pub fn optimize_alphabet(config: &OptimizerConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let eval = EvalSet::generate(config.eval_spec()?)?;
    let de = run_de_on(config, &eval);
    let refined = refine_powell_on(&levels_from_params(&de.best), config, &eval)?;
    let alphabet = Alphabet::from_positive_levels(format!("opt-b{}-d{}", config.bit_width, config.dimension), &refined.levels)?
        .normalize()?;
    let objective = eval.worst_angle(&alphabet)?;
    let holdout = estimate_worst_case(
        &alphabet,
        SampleSpec::new(config.dimension, config.holdout_samples, config.holdout_seed)?,
    )?;
    Ok(OptimizationResult {
        alphabet,
        objective,
        de_objective: de.best_value,
        history: de.history,
        powell_iterations: refined.iterations,
        holdout,
    })
}
