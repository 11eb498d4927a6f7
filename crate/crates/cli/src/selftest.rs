//! Reduced-scale invariant checks over every module.

use std::f64::consts::{FRAC_PI_4, PI};

use anyhow::{bail, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use dircov_core::bounds::{
    arbitrary_lower_constant, deficit_ratio, fp_obstruction_constant, harmonic_witness, quadratic_form_value,
    sign_count_lower_bound, sign_symmetric_upper_bound,
};
use dircov_core::estimate::{estimate_worst_case, sample_angles};
use dircov_core::exact2d::{classify_dim2, f2_exact};
use dircov_core::geometry::{min_angle_bruteforce, min_angle_exact};
use dircov_core::parallel::with_threads;
use dircov_core::{Alphabet, Dim2Case, SampleSpec, UnitVector};

use crate::output::{emit, Run};
use crate::{load_alphabet, SelftestArgs};

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct Report {
    passed: bool,
    checks: Vec<Check>,
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn standard() -> Vec<Alphabet> {
    ["e2m1", "e1m2", "e3m0", "int4"].iter().map(|f| Alphabet::from_format(f).expect("built-in format")).collect()
}

fn random_mixed_alphabet(rng: &mut ChaCha8Rng, q: usize) -> Alphabet {
    loop {
        let values: Vec<f64> = (0..q).map(|_| rng.random_range(-4i32..=4) as f64 * rng.random_range(0.5..2.0)).collect();
        if let Ok(a) = Alphabet::new("random", values) {
            if a.is_mixed_sign() {
                return a;
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Ok(u) = UnitVector::from_raw(v) {
            return u;
        }
    }
}

fn oracle(extra: &[Alphabet], seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut compare = |u: &UnitVector, a: &Alphabet| -> Result<(), String> {
        let e = min_angle_exact(u, a).map_err(|e| e.to_string())?;
        let b = min_angle_bruteforce(u, a).map_err(|e| e.to_string())?;
        worst = worst.max((e.angle - b.angle).abs());
        count += 1;
        ensure((e.angle - b.angle).abs() <= 1e-9, || format!("exact {} vs brute force {} on {:?}", e.angle, b.angle, a.values()))
    };
    for _ in 0..300 {
        let n = rng.random_range(2..=4);
        let q = rng.random_range(2..=5);
        let a = random_mixed_alphabet(&mut rng, q);
        compare(&random_unit(&mut rng, n), &a)?;
    }
    for a in extra {
        for n in 2..=3 {
            if (a.len() as f64).powi(n as i32) <= 1e5 {
                for _ in 0..20 {
                    compare(&random_unit(&mut rng, n), a)?;
                }
            }
        }
    }
    Ok(format!("{count} instances, max difference {worst:.2e} rad"))
}

fn dim2(seed: u64) -> Outcome {
    let pair = Alphabet::new("pair", vec![-1.0, 1.0]).expect("valid");
    let f = f2_exact(&pair).map_err(|e| e.to_string())?;
    ensure((f - FRAC_PI_4).abs() <= 1e-12, || format!("F2({{-1,1}}) = {f}"))?;
    ensure(classify_dim2(&pair).map_err(|e| e.to_string())?.case == Dim2Case::AntipodalOptimal, || {
        "{-1,1} not antipodal".into()
    })?;
    let skew = Alphabet::new("skew", vec![-2.0, 1.0]).expect("valid");
    ensure(f2_exact(&skew).map_err(|e| e.to_string())? > FRAC_PI_4, || "F2({-2,1}) not above pi/4".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let q = rng.random_range(3..=8);
        let values: Vec<f64> = (0..q).map(|_| rng.random_range(-5.0..5.0)).collect();
        let Ok(a) = Alphabet::new("random", values) else { continue };
        let f = f2_exact(&a).map_err(|e| e.to_string())?;
        let target = PI / (q * q) as f64;
        ensure(f > target, || format!("F2 = {f} not above pi/q^2 = {target} for {:?}", a.values()))?;
    }
    Ok("antipodal optimum and strict separation hold".into())
}

fn witness(alphabets: &[Alphabet]) -> Outcome {
    let mut tightest = f64::INFINITY;
    for a in alphabets.iter().filter(|a| a.is_mixed_sign()) {
        for n in [4usize, 16, 64, 256] {
            let u = harmonic_witness(n).map_err(|e| e.to_string())?;
            let angle = min_angle_exact(&u, a).map_err(|e| e.to_string())?.angle;
            let bound = sign_count_lower_bound(a, n).map_err(|e| e.to_string())?;
            tightest = tightest.min(angle - bound);
            ensure(angle >= bound - 1e-9, || format!("{} at n={n}: witness {angle} below bound {bound}", a.name()))?;
        }
    }
    Ok(format!("smallest margin {tightest:.3e} rad"))
}

fn upper_bound(alphabets: &[Alphabet], seed: u64) -> Outcome {
    let mut checked = 0;
    for a in alphabets.iter().filter(|a| a.is_sign_symmetric() && a.contains_zero()) {
        let bound = sign_symmetric_upper_bound(a).map_err(|e| e.to_string())?;
        for n in [4usize, 16, 64] {
            let est = estimate_worst_case(a, SampleSpec::new(n, 5_000, seed).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            checked += 1;
            ensure(est.normalized_deficit <= bound + 1e-6, || {
                format!("{} at n={n}: deficit {} above bound {bound}", a.name(), est.normalized_deficit)
            })?;
        }
    }
    Ok(format!("{checked} cases"))
}

fn quadratic_form(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = rng.random_range(1..=12);
        let mut c: Vec<f64> = Vec::with_capacity(m);
        let mut level = rng.random_range(0.1..1.0);
        for _ in 0..m {
            c.push(level);
            level += rng.random_range(0.1..1.0);
        }
        c.reverse();
        let q = DMatrix::from_fn(m, m, |i, j| c[i.max(j)].powi(2));
        let inv = q.try_inverse().ok_or("singular matrix")?;
        let v = nalgebra::DVector::from_column_slice(&c);
        let direct = v.dot(&(inv * &v));
        let closed = quadratic_form_value(&c).map_err(|e| e.to_string())?;
        worst = worst.max((direct - closed).abs());
        ensure((direct - closed).abs() <= 1e-10, || format!("closed form {closed} vs inverse {direct} for {c:?}"))?;
    }
    Ok(format!("max difference {worst:.2e}"))
}

fn constants() -> Outcome {
    let fp = fp_obstruction_constant(4).map_err(|e| e.to_string())?;
    let arb = arbitrary_lower_constant(4).map_err(|e| e.to_string())?;
    let ratio = deficit_ratio(4).map_err(|e| e.to_string())?;
    ensure((fp - 12f64.sqrt()).abs() <= 1e-12, || format!("fp constant {fp}"))?;
    ensure((arb - 2.0 * 7f64.sqrt()).abs() <= 1e-12, || format!("arbitrary constant {arb}"))?;
    ensure((ratio - 1.528).abs() <= 1e-3, || format!("ratio {ratio}"))?;
    Ok(format!("{fp:.6} {arb:.6} {ratio:.4}"))
}

fn partial_sums() -> Outcome {
    let mut sum = 0.0;
    for m in 1..=100_000u64 {
        sum += 1.0 / (m as f64).sqrt();
        let bound = 2.0 * (m as f64).sqrt();
        ensure(sum <= bound, || format!("partial sum {sum} above {bound} at m={m}"))?;
    }
    Ok("m <= 100000".into())
}

fn unmatched(seed: u64) -> Outcome {
    let int4 = Alphabet::from_format("int4").expect("built-in");
    let e1m2 = Alphabet::from_format("e1m2").expect("built-in");
    for n in [4usize, 16] {
        let spec = SampleSpec::new(n, 5_000, seed).map_err(|e| e.to_string())?;
        let big = sample_angles(&int4, spec).map_err(|e| e.to_string())?;
        let small = sample_angles(&e1m2, spec).map_err(|e| e.to_string())?;
        if let Some(k) = big.iter().zip(&small).position(|(b, s)| b > s) {
            return Err(format!("n={n} sample {k}: superset angle {} above {}", big[k], small[k]));
        }
    }
    Ok("superset never worse".into())
}

fn determinism(alphabets: &[Alphabet], seed: u64) -> Outcome {
    for a in alphabets.iter().filter(|a| a.is_mixed_sign()) {
        let spec = SampleSpec::new(8, 4_000, seed).map_err(|e| e.to_string())?;
        let one = with_threads(1, || estimate_worst_case(a, spec)).map_err(|e| e.to_string())?;
        let three = with_threads(3, || estimate_worst_case(a, spec)).map_err(|e| e.to_string())?;
        ensure(one == three, || format!("{} differs between 1 and 3 workers", a.name()))?;
        let scaled = a.scaled(3.0).map_err(|e| e.to_string())?;
        let s = estimate_worst_case(&scaled, spec).map_err(|e| e.to_string())?;
        ensure(s.max_angle == one.max_angle, || format!("{} not scale invariant", a.name()))?;
    }
    Ok("identical across worker counts and scalings".into())
}

pub fn run(args: &SelftestArgs) -> Result<()> {
    let run = Run::start("selftest", args, Some(args.seed))?;
    let mut checks = Vec::new();
    let mut record = |name: &'static str, outcome: Outcome| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(Check { name, passed, detail });
    };

    let mut alphabets = standard();
    let mut extra = Vec::new();
    if let Some(spec) = &args.alphabet {
        match load_alphabet(spec) {
            Ok(a) if a.is_mixed_sign() => {
                record("alphabet_input", Ok(format!("{} with {} values", a.name(), a.len())));
                extra.push(a.clone());
                alphabets.push(a);
            }
            Ok(a) => record("alphabet_input", Err(format!("{} does not have values of both signs", a.name()))),
            Err(e) => record("alphabet_input", Err(format!("{e:#}"))),
        }
    }
    let seed = args.seed;
    record("scale_sweep_oracle", oracle(&extra, seed));
    record("dim2_classification", dim2(seed));
    record("witness_lower_bound", witness(&alphabets));
    record("symmetric_upper_bound", upper_bound(&alphabets, seed));
    record("quadratic_form_identity", quadratic_form(seed));
    record("closed_form_constants", constants());
    record("partial_sum_inequality", partial_sums());
    record("unmatched_scalar", unmatched(seed));
    record("determinism", determinism(&alphabets, seed));

    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        eprintln!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    emit(&run.json(&Report { passed, checks })?, args.out.as_deref())?;
    if !passed {
        bail!("selftest failed: {}", failed.join(", "));
    }
    Ok(())
}
