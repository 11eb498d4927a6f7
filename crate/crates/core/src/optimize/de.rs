//! DE/rand/1/bin over unconstrained parameter vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Settings for one differential-evolution run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeSettings {
    pub population: usize,
    pub weight: f64,
    pub crossover: f64,
    pub generations: usize,
    pub init_low: f64,
    pub init_high: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeOutcome {
    pub best: Vec<f64>,
    pub best_value: f64,
    /// `(generation, best value so far)`, starting with generation 0.
    pub history: Vec<(usize, f64)>,
}

fn best_of(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Minimizes `f` over `dim`-dimensional vectors.
///
/// Trial vectors are drawn sequentially from one seeded stream and then
/// scored in parallel, so the outcome does not depend on the worker count.
pub fn differential_evolution<F>(f: F, dim: usize, s: &DeSettings) -> DeOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(s.population >= 4 && dim >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut pop: Vec<Vec<f64>> = (0..s.population)
        .map(|_| (0..dim).map(|_| rng.random_range(s.init_low..=s.init_high)).collect())
        .collect();
    let mut scores: Vec<f64> = pop.par_iter().map(|x| f(x)).collect();
    let mut history = vec![(0, scores[best_of(&scores)])];

    for generation in 1..=s.generations {
        let trials: Vec<Vec<f64>> = (0..s.population)
            .map(|i| {
                let pick = |rng: &mut ChaCha8Rng, avoid: &[usize]| loop {
                    let r = rng.random_range(0..s.population);
                    if !avoid.contains(&r) {
                        break r;
                    }
                };
                let r1 = pick(&mut rng, &[i]);
                let r2 = pick(&mut rng, &[i, r1]);
                let r3 = pick(&mut rng, &[i, r1, r2]);
                let forced = rng.random_range(0..dim);
                (0..dim)
                    .map(|j| {
                        if j == forced || rng.random::<f64>() < s.crossover {
                            pop[r1][j] + s.weight * (pop[r2][j] - pop[r3][j])
                        } else {
                            pop[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        let trial_scores: Vec<f64> = trials.par_iter().map(|x| f(x)).collect();
        for (i, (trial, score)) in trials.into_iter().zip(trial_scores).enumerate() {
            if score <= scores[i] {
                pop[i] = trial;
                scores[i] = score;
            }
        }
        history.push((generation, scores[best_of(&scores)]));
    }
    let b = best_of(&scores);
    DeOutcome { best: pop[b].clone(), best_value: scores[b], history }
}
