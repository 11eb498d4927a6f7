//! Powell's conjugate-direction method with golden-section line searches.

const GOLD: f64 = 1.618_033_988_749_895;
const INV_GOLD: f64 = 0.618_033_988_749_895;
const INITIAL_STEP: f64 = 0.1;
const MAX_EXPANSIONS: usize = 60;
const MAX_GOLDEN_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct PowellOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Counted<'a, F> {
    f: &'a F,
    calls: usize,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.calls += 1;
        (self.f)(x)
    }
}

fn along(x: &[f64], d: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + t * di).collect()
}

/// Minimizes `t -> f(x + t d)` by bracketing then golden section.
///
/// Returns the best step seen, which is 0 when nothing beats `f0`.
fn line_minimize<F: Fn(&[f64]) -> f64>(
    f: &mut Counted<'_, F>,
    x: &[f64],
    d: &[f64],
    f0: f64,
    tol: f64,
) -> (f64, f64) {
    let mut best = (0.0, f0);
    let probe = |f: &mut Counted<'_, F>, t: f64, best: &mut (f64, f64)| {
        let v = f.eval(&along(x, d, t));
        if v < best.1 {
            *best = (t, v);
        }
        v
    };

    let (mut a, mut fa) = (0.0, f0);
    let (mut b, mut fb) = (INITIAL_STEP, probe(f, INITIAL_STEP, &mut best));
    let (lo, hi) = if fb < fa {
        let mut bracket = None;
        for _ in 0..MAX_EXPANSIONS {
            let c = b + GOLD * (b - a);
            let fc = probe(f, c, &mut best);
            if fc >= fb {
                bracket = Some((a, c));
                break;
            }
            (a, fa, b, fb) = (b, fb, c, fc);
        }
        let _ = fa;
        match bracket {
            Some(br) => br,
            None => return best,
        }
    } else {
        let fm = probe(f, -INITIAL_STEP, &mut best);
        if fm < f0 {
            (a, b, fb) = (0.0, -INITIAL_STEP, fm);
            let mut bracket = None;
            for _ in 0..MAX_EXPANSIONS {
                let c = b + GOLD * (b - a);
                let fc = probe(f, c, &mut best);
                if fc >= fb {
                    bracket = Some((c, a));
                    break;
                }
                (a, b, fb) = (b, c, fc);
            }
            match bracket {
                Some(br) => br,
                None => return best,
            }
        } else {
            (-INITIAL_STEP, INITIAL_STEP)
        }
    };

    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut x1 = hi - INV_GOLD * (hi - lo);
    let mut x2 = lo + INV_GOLD * (hi - lo);
    let mut f1 = probe(f, x1, &mut best);
    let mut f2 = probe(f, x2, &mut best);
    for _ in 0..MAX_GOLDEN_STEPS {
        if hi - lo <= tol * (1.0 + 0.5 * (lo + hi).abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - INV_GOLD * (hi - lo);
            f1 = probe(f, x1, &mut best);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + INV_GOLD * (hi - lo);
            f2 = probe(f, x2, &mut best);
        }
    }
    best
}

/// Minimizes `f` from `x0`.
///
/// Stops when one full sweep improves the value by less than `tol` relative
/// to its magnitude, or after `max_iterations` sweeps. The returned value
/// never exceeds `f(x0)`.
pub fn powell_minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], tol: f64, max_iterations: usize) -> PowellOutcome {
    let n = x0.len();
    let mut counted = Counted { f: &f, calls: 0 };
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut x = x0.to_vec();
    let mut fx = counted.eval(&x);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iterations {
        iterations += 1;
        let (x_start, f_start) = (x.clone(), fx);
        let (mut biggest_drop, mut biggest_index) = (0.0, 0);
        for (i, d) in dirs.iter().enumerate() {
            let before = fx;
            let (t, ft) = line_minimize(&mut counted, &x, d, fx, tol);
            if ft < fx {
                x = along(&x, d, t);
                fx = ft;
            }
            if before - fx > biggest_drop {
                biggest_drop = before - fx;
                biggest_index = i;
            }
        }
        if 2.0 * (f_start - fx) <= tol * (f_start.abs() + fx.abs()) + 1e-300 {
            converged = true;
            break;
        }
        let shift: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
        let len = shift.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let extrapolated: Vec<f64> = x.iter().zip(&shift).map(|(a, s)| a + s).collect();
        let f_ext = counted.eval(&extrapolated);
        if f_ext < f_start {
            let test = 2.0 * (f_start - 2.0 * fx + f_ext) * (f_start - fx - biggest_drop).powi(2)
                - biggest_drop * (f_start - f_ext).powi(2);
            if test < 0.0 {
                let unit: Vec<f64> = shift.iter().map(|s| s / len).collect();
                let (t, ft) = line_minimize(&mut counted, &x, &unit, fx, tol);
                if ft < fx {
                    x = along(&x, &unit, t);
                    fx = ft;
                }
                dirs[biggest_index] = dirs[n - 1].clone();
                dirs[n - 1] = unit;
            }
        }
    }
    PowellOutcome { x, value: fx, iterations, evaluations: counted.calls, converged }
}
