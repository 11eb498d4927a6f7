//! Scalar quantization and nearest-direction search in a product code.
//!
//! The nearest codeword (in angle) to a unit vector `u` over `A^n \ {0}` is
//! found by sweeping a positive scale `s` and quantizing `s * u` coordinatewise.
//! When `A` holds both signs this sweep is exact: some scale quantizes to an
//! angle-optimal codeword. The quantized vector only changes when some
//! `s * u_i` crosses a cell boundary (midpoint of adjacent alphabet values), so
//! it suffices to inspect one scale per interval between those breakpoints.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Tolerance on `| ||u|| - 1 |` accepted by [`UnitVector::new`].
pub const UNIT_NORM_TOLERANCE: f64 = 1e-12;

/// Upper bound on `q^n` for exhaustive enumeration.
pub const MAX_ENUMERATION: u64 = 10_000_000;

/// A direction on the unit sphere of dimension `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        UnitVector::new(coords)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.coords
    }
}

impl UnitVector {
    /// Wraps coordinates that already have unit norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dimension(coords.len())?;
        let norm = norm(&coords);
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::Domain(format!("vector norm {norm} is not 1")));
        }
        Ok(Self { coords })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn from_raw(mut coords: Vec<f64>) -> Result<Self> {
        check_dimension(coords.len())?;
        let norm = norm(&coords);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Nearest product codeword to a query direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordResult {
    /// Entries drawn from the alphabet; never the zero vector.
    pub codeword: Vec<f64>,
    /// Angle in radians between the query and the codeword.
    pub angle: f64,
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Angle between a unit vector and a nonzero vector, in `[0, pi]`.
///
/// `x` is first divided by its largest magnitude, so `x` and `c * x` give
/// bit-identical angles whenever `c * x` is exact. The angle is
/// `2 atan2(|u - x/|x||, |u + x/|x||)`, which agrees with `acos(<u, x> / |x|)`
/// but keeps full precision near 0 and pi.
pub fn angle_between(u: &[f64], x: &[f64]) -> f64 {
    angle_of(u, |i| x[i])
}

fn angle_of(u: &[f64], x: impl Fn(usize) -> f64) -> f64 {
    let n = u.len();
    let m = (0..n).fold(0.0f64, |m, i| m.max(x(i).abs()));
    let nh = (0..n).map(|i| (x(i) / m).powi(2)).sum::<f64>().sqrt();
    let (mut diff, mut sum) = (0.0, 0.0);
    for (i, &ui) in u.iter().enumerate() {
        let h = x(i) / m / nh;
        diff += (ui - h) * (ui - h);
        sum += (ui + h) * (ui + h);
    }
    (2.0 * diff.sqrt().atan2(sum.sqrt())).clamp(0.0, std::f64::consts::PI)
}

/// Index of the value nearest to `x` in an ascending slice.
///
/// Ties go to the smaller magnitude, then to the negative value.
pub(crate) fn nearest_index(values: &[f64], x: f64) -> usize {
    let k = values.partition_point(|&v| v < x);
    if k == 0 {
        return 0;
    }
    if k == values.len() {
        return k - 1;
    }
    let (lo, hi) = (values[k - 1], values[k]);
    let (dl, dh) = (x - lo, hi - x);
    if dl < dh {
        k - 1
    } else if dh < dl {
        k
    } else if hi.abs() < lo.abs() {
        k
    } else {
        k - 1
    }
}

/// Nearest alphabet value to `x`; ties go to the smaller magnitude, then the
/// negative value.
pub fn quantize_scalar(x: f64, a: &Alphabet) -> f64 {
    a.values()[nearest_index(a.values(), x)]
}

#[derive(Debug, Clone, Copy)]
struct Event {
    scale: f64,
    coord: u32,
    index: u32,
}

/// Cosines within this distance of the best one are re-scored exactly.
const TIE_WINDOW: f64 = 1e-12;

/// Reusable exact nearest-direction solver for one alphabet.
///
/// Holds scratch buffers so that repeated queries do not allocate. The sweep
/// ranks intervals by an incrementally updated cosine; every interval within
/// `TIE_WINDOW` of the best is then re-scored with [`angle_between`]. Results
/// for `lambda * A` are therefore bit-identical to those for `A` whenever
/// `lambda * a` is exact for every value, and a superset alphabet never
/// reports a larger angle for the same direction.
#[derive(Debug, Clone)]
pub struct ScaleSweep {
    original: Vec<f64>,
    values: Vec<f64>,
    midpoints: Vec<f64>,
    /// Number of midpoints `<= 0`: the cell of a tiny positive input.
    pos_start: usize,
    /// Number of midpoints `< 0`: the cell of a tiny negative input.
    neg_start: usize,
    zero_index: usize,
    zero_value_index: Option<usize>,
    events: Vec<Event>,
    indices: Vec<u32>,
    current: Vec<u32>,
    /// `(events applied, cosine)` of the near-best intervals.
    candidates: Vec<(usize, f64)>,
    best: Vec<u32>,
}

impl ScaleSweep {
    /// Fails with [`Error::Precondition`] unless the alphabet has both signs.
    pub fn new(a: &Alphabet) -> Result<Self> {
        if !a.is_mixed_sign() {
            return Err(Error::Precondition(format!(
                "scale sweep needs positive and negative values; alphabet {} has a single sign",
                a.name()
            )));
        }
        let original = a.values().to_vec();
        let largest = original.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = 2f64.powi(largest.log2().floor() as i32);
        let values: Vec<f64> = original.iter().map(|v| v / scale).collect();
        let midpoints: Vec<f64> = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let pos_start = midpoints.partition_point(|&m| m <= 0.0);
        let neg_start = midpoints.partition_point(|&m| m < 0.0);
        let zero_index = nearest_index(&values, 0.0);
        let zero_value_index = values.iter().position(|&v| v == 0.0);
        Ok(Self {
            original,
            values,
            midpoints,
            pos_start,
            neg_start,
            zero_index,
            zero_value_index,
            events: Vec::new(),
            indices: Vec::new(),
            current: Vec::new(),
            candidates: Vec::new(),
            best: Vec::new(),
        })
    }

    /// Builds the sorted breakpoint list and the quantization just above `s = 0`.
    fn prepare(&mut self, u: &[f64]) {
        self.events.clear();
        self.indices.clear();
        for (i, &ui) in u.iter().enumerate() {
            let coord = i as u32;
            if ui > 0.0 {
                self.indices.push(self.pos_start as u32);
                for k in self.pos_start..self.midpoints.len() {
                    self.events.push(Event {
                        scale: self.midpoints[k] / ui,
                        coord,
                        index: (k + 1) as u32,
                    });
                }
            } else if ui < 0.0 {
                self.indices.push(self.neg_start as u32);
                for k in (0..self.neg_start).rev() {
                    self.events.push(Event { scale: self.midpoints[k] / ui, coord, index: k as u32 });
                }
            } else {
                self.indices.push(self.zero_index as u32);
            }
        }
        // all scales are positive, so the IEEE bit pattern orders them
        self.events.sort_unstable_by_key(|e| e.scale.to_bits());
    }

    /// Runs the sweep and fills `self.candidates`. `self.indices` holds the
    /// initial quantization afterwards.
    fn sweep(&mut self, u: &[f64]) {
        self.prepare(u);
        let zero = self.zero_value_index.map(|z| z as u32);
        let mut dot = 0.0;
        let mut norm2 = 0.0;
        let mut nonzero = 0usize;
        for (&ui, &k) in u.iter().zip(&self.indices) {
            let v = self.values[k as usize];
            dot += ui * v;
            norm2 += v * v;
            if Some(k) != zero {
                nonzero += 1;
            }
        }
        self.current.clear();
        self.current.extend_from_slice(&self.indices);
        let current = &mut self.current;
        let candidates = &mut self.candidates;
        candidates.clear();
        let mut best_cos = f64::NEG_INFINITY;
        if nonzero > 0 {
            best_cos = dot / norm2.sqrt();
            candidates.push((0, best_cos));
        }
        let mut pos = 0;
        let events = &self.events;
        while pos < events.len() {
            let s = events[pos].scale;
            while pos < events.len() && events[pos].scale == s {
                let e = events[pos];
                let c = e.coord as usize;
                let old = current[c];
                let (vo, vn) = (self.values[old as usize], self.values[e.index as usize]);
                dot += u[c] * (vn - vo);
                norm2 += vn * vn - vo * vo;
                if Some(old) == zero {
                    nonzero += 1;
                }
                current[c] = e.index;
                pos += 1;
            }
            if nonzero > 0 {
                let cos = dot / norm2.sqrt();
                best_cos = best_cos.max(cos);
                if cos >= best_cos - TIE_WINDOW {
                    candidates.push((pos, cos));
                    if candidates.len() > 64 {
                        candidates.retain(|c| c.1 >= best_cos - TIE_WINDOW);
                    }
                }
            }
        }
        candidates.retain(|c| c.1 >= best_cos - TIE_WINDOW);
    }

    /// Re-scores the candidates and leaves the winner in `self.best`.
    fn resolve(&mut self, u: &[f64]) -> f64 {
        let mut best_angle = f64::INFINITY;
        let mut applied = 0;
        for &(pos, _) in &self.candidates {
            for e in &self.events[applied..pos] {
                self.indices[e.coord as usize] = e.index;
            }
            applied = pos;
            let angle = angle_of(u, |i| self.values[self.indices[i] as usize]);
            if angle < best_angle {
                best_angle = angle;
                self.best.clear();
                self.best.extend_from_slice(&self.indices);
            }
        }
        best_angle
    }

    /// Exact minimum angle from `u` to the product code and one codeword
    /// attaining it.
    pub fn nearest(&mut self, u: &[f64]) -> CodewordResult {
        self.sweep(u);
        let angle = self.resolve(u);
        let codeword = self.best.iter().map(|&k| self.original[k as usize]).collect();
        CodewordResult { codeword, angle }
    }

    /// Exact minimum angle only.
    pub fn min_angle(&mut self, u: &[f64]) -> f64 {
        self.sweep(u);
        self.resolve(u)
    }
}

/// Exact minimum angle between `u` and the directions of `A^n \ {0}`.
///
/// Requires an alphabet with at least one positive and one negative value.
pub fn min_angle_exact(u: &UnitVector, a: &Alphabet) -> Result<CodewordResult> {
    Ok(ScaleSweep::new(a)?.nearest(u.coords()))
}

fn enumeration_size(q: usize, n: usize) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(q as u64);
        if total > MAX_ENUMERATION {
            return Err(Error::Resource(format!(
                "enumerating {q}^{n} codewords exceeds the limit of {MAX_ENUMERATION}"
            )));
        }
    }
    Ok(total)
}

/// Visits every vector of `A^n` except zero, as alphabet indices.
fn for_each_codeword(q: usize, n: usize, zero: Option<usize>, mut visit: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; n];
    loop {
        if zero.is_none_or(|z| idx.iter().any(|&k| k != z)) {
            visit(&idx);
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            idx[i] += 1;
            if idx[i] < q {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive nearest codeword over `A^n \ {0}`; works for any alphabet.
///
/// Fails with [`Error::Resource`] when `q^n` exceeds [`MAX_ENUMERATION`].
pub fn min_angle_bruteforce(u: &UnitVector, a: &Alphabet) -> Result<CodewordResult> {
    let n = u.dim();
    let q = a.len();
    enumeration_size(q, n)?;
    let scale = a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let values: Vec<f64> = a.values().iter().map(|v| v / scale).collect();
    let zero = values.iter().position(|&v| v == 0.0);
    let uc = u.coords();
    let mut best_cos = f64::NEG_INFINITY;
    let mut best = vec![0usize; n];
    for_each_codeword(q, n, zero, |idx| {
        let (mut dot, mut norm2) = (0.0, 0.0);
        for (&ui, &k) in uc.iter().zip(idx) {
            dot += ui * values[k];
            norm2 += values[k] * values[k];
        }
        let cos = dot / norm2.sqrt();
        if cos > best_cos {
            best_cos = cos;
            best.copy_from_slice(idx);
        }
    });
    let codeword: Vec<f64> = best.iter().map(|&k| a.values()[k]).collect();
    Ok(CodewordResult { angle: angle_between(uc, &codeword), codeword })
}

/// Tolerance used when merging canonical direction representatives.
pub const DIRECTION_DEDUP_TOLERANCE: f64 = 1e-12;

/// The direction set `{ x / |x| : x in A^n \ {0} }`, deduplicated.
///
/// Each codeword is first scaled so its first nonzero coordinate has absolute
/// value 1; representatives within [`DIRECTION_DEDUP_TOLERANCE`] (max-norm)
/// are merged. Output is in lexicographic order of the representatives.
pub fn enumerate_directions(a: &Alphabet, n: usize) -> Result<Vec<UnitVector>> {
    check_dimension(n)?;
    let q = a.len();
    enumeration_size(q, n)?;
    let values = a.values();
    let zero = values.iter().position(|&v| v == 0.0);
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for_each_codeword(q, n, zero, |idx| {
        let lead = idx.iter().map(|&k| values[k]).find(|&v| v != 0.0).unwrap().abs();
        reps.push(idx.iter().map(|&k| values[k] / lead).collect());
    });
    reps.sort_by(|x, y| {
        x.iter().zip(y).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    reps.dedup_by(|x, y| x.iter().zip(y.iter()).all(|(a, b)| (a - b).abs() <= DIRECTION_DEDUP_TOLERANCE));
    reps.into_iter().map(UnitVector::from_raw).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn alpha(v: &[f64]) -> Alphabet {
        Alphabet::new("t", v.to_vec()).unwrap()
    }

    fn unit(v: &[f64]) -> UnitVector {
        UnitVector::from_raw(v.to_vec()).unwrap()
    }

    #[test]
    fn quantize_examples() {
        let a = alpha(&[-2., -1., 0., 1., 2.]);
        assert_eq!(quantize_scalar(0.4, &a), 0.0);
        assert_eq!(quantize_scalar(1.5, &a), 1.0);
        assert_eq!(quantize_scalar(-1.5, &a), -1.0);
        assert_eq!(quantize_scalar(100.0, &a), 2.0);
        assert_eq!(quantize_scalar(-100.0, &a), -2.0);
        assert_eq!(quantize_scalar(0.5, &a), 0.0);
        // equal magnitude tie goes negative
        assert_eq!(quantize_scalar(0.0, &alpha(&[-1., 1.])), -1.0);
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(vec![1.0, 0.0]).is_ok());
        assert!(UnitVector::new(vec![1.0, 1.0]).is_err());
        assert!(UnitVector::new(vec![1.0]).is_err());
        assert!(matches!(UnitVector::from_raw(vec![0.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_axis_direction() {
        let r = min_angle_exact(&unit(&[1., 0.]), &alpha(&[-1., 0., 1.])).unwrap();
        assert_eq!(r.angle, 0.0);
        assert_eq!(r.codeword, vec![1.0, 0.0]);
    }

    #[test]
    fn exact_binary_half_octant() {
        let t = PI / 8.0;
        let r = min_angle_exact(&unit(&[t.cos(), t.sin()]), &alpha(&[-1., 1.])).unwrap();
        assert!((r.angle - PI / 8.0).abs() < 1e-12, "{}", r.angle);
        assert_eq!(r.codeword, vec![1.0, 1.0]);
    }

    #[test]
    fn exact_all_ones() {
        let r = min_angle_exact(&unit(&[0.5, 0.5, 0.5, 0.5]), &alpha(&[-1., 1.])).unwrap();
        assert_eq!(r.angle, 0.0);
    }

    #[test]
    fn single_sign_is_refused() {
        let err = min_angle_exact(&unit(&[1., 1.]), &alpha(&[0., 1., 2.])).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn bruteforce_examples() {
        let r = min_angle_bruteforce(&unit(&[1., 0.]), &alpha(&[-2., -1., 0., 1., 2.])).unwrap();
        assert_eq!(r.angle, 0.0);
        // angle between (0.6, 0.8) and (1, 1)/sqrt2 is atan(4/3) - pi/4
        let r = min_angle_bruteforce(&UnitVector::new(vec![0.6, 0.8]).unwrap(), &alpha(&[-1., 1.])).unwrap();
        let expected = (4.0f64 / 3.0).atan() - PI / 4.0;
        assert!((r.angle - expected).abs() < 1e-12);
        assert!((r.angle - 0.1419).abs() < 1e-4);
        // single-sign alphabets are fine for the oracle
        let r = min_angle_bruteforce(&unit(&[1., 2.]), &alpha(&[0., 1., 2.])).unwrap();
        assert_eq!(r.angle, 0.0);
    }

    #[test]
    fn bruteforce_guard() {
        let a = Alphabet::twos_complement(4).unwrap();
        let u = UnitVector::from_raw(vec![1.0; 6]).unwrap();
        assert!(matches!(min_angle_bruteforce(&u, &a), Err(Error::Resource(_))));
    }

    #[test]
    fn direction_counts() {
        assert_eq!(enumerate_directions(&alpha(&[-1., 1.]), 2).unwrap().len(), 4);
        let d = enumerate_directions(&alpha(&[0., 1.]), 2).unwrap();
        assert_eq!(d.len(), 3);
        let d = enumerate_directions(&alpha(&[-1., 0., 1., 2.]), 2).unwrap();
        assert!(d.len() <= 15);
        for u in &d {
            assert!((norm(u.coords()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_matches_bruteforce_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(2..=4);
            let q = rng.random_range(2..=5);
            let mut vals: Vec<f64> = Vec::new();
            while vals.len() < q {
                let v = (rng.random_range(-8.0f64..8.0) * 4.0).round() / 4.0;
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
            let a = match Alphabet::new("r", vals) {
                Ok(a) if a.is_mixed_sign() => a,
                _ => continue,
            };
            let u = UnitVector::from_raw((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let e = min_angle_exact(&u, &a).unwrap();
            let b = min_angle_bruteforce(&u, &a).unwrap();
            assert!((e.angle - b.angle).abs() <= 1e-9, "{a:?} {u:?} {e:?} {b:?}");
            assert!((angle_between(u.coords(), &e.codeword) - e.angle).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_coordinate_without_zero_value() {
        // u_i = 0 and 0 not in A: the coordinate stays at the smallest magnitude
        let a = alpha(&[-3., -1., 2.]);
        let u = unit(&[1., 0., -1.]);
        let e = min_angle_exact(&u, &a).unwrap();
        let b = min_angle_bruteforce(&u, &a).unwrap();
        assert!((e.angle - b.angle).abs() < 1e-12);
    }

    #[test]
    fn scaling_is_bit_exact() {
        let a = Alphabet::float(2, 1).unwrap();
        let u = unit(&[0.3, -0.7, 0.11, 0.5, -0.05]);
        let base = min_angle_exact(&u, &a).unwrap().angle;
        for lambda in [0.5, 3.0, 7.25] {
            let scaled = a.scaled(lambda).unwrap();
            assert_eq!(min_angle_exact(&u, &scaled).unwrap().angle, base);
        }
    }

    #[test]
    fn min_angle_matches_nearest() {
        let a = Alphabet::twos_complement(4).unwrap();
        let mut s = ScaleSweep::new(&a).unwrap();
        let u = unit(&[0.3, -0.7, 0.11, 0.5, -0.05, 0.9]);
        assert_eq!(s.min_angle(u.coords()), s.nearest(u.coords()).angle);
    }
}
