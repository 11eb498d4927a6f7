//! Finite scalar alphabets.
//!
//! An [`Alphabet`] is a sorted set of distinct real values. Constructors cover
//! the standard low-precision families: the canonical floating-point family
//! (denormals, no special values; `e = 1` is symmetric fixed point), two's
//! complement integers, and sign-symmetric power ladders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent-plus-mantissa width accepted by [`Alphabet::float`].
pub const MAX_FLOAT_BITS: u32 = 16;

/// A named finite set of distinct real scalars, stored ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAlphabet")]
pub struct Alphabet {
    name: String,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawAlphabet {
    name: String,
    values: Vec<f64>,
}

impl TryFrom<RawAlphabet> for Alphabet {
    type Error = Error;

    fn try_from(raw: RawAlphabet) -> Result<Self> {
        Alphabet::new(raw.name, raw.values)
    }
}

/// Counts of strictly positive and strictly negative values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCounts {
    pub positive: usize,
    pub negative: usize,
    pub min_count: usize,
}

impl Alphabet {
    /// Builds an alphabet from arbitrary-order values.
    ///
    /// Values are sorted; duplicates (exact equality, so `-0.0 == 0.0`),
    /// non-finite values and sets with fewer than two elements are rejected.
    pub fn new(name: impl Into<String>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "alphabet needs at least 2 values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite alphabet value {v}")));
        }
        for v in values.iter_mut() {
            // fold -0.0 into +0.0
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        values.sort_by(f64::total_cmp);
        if let Some(w) = values.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("duplicate alphabet value {}", w[0])));
        }
        Ok(Self { name: name.into(), values })
    }

    /// Canonical floating-point alphabet with `e` exponent bits and `t`
    /// trailing mantissa bits, decoded up to global scale so the smallest
    /// positive value is 1.
    ///
    /// Positive levels are the denormals `1..2^t` plus the normals
    /// `(2^t + m) * 2^j` for `0 <= m < 2^t`, `0 <= j <= 2^e - 2`.
    pub fn float(e: u32, t: u32) -> Result<Self> {
        if e < 1 || e + t > MAX_FLOAT_BITS {
            return Err(Error::InvalidParameter(format!(
                "float alphabet needs e >= 1 and e + t <= {MAX_FLOAT_BITS}, got e={e}, t={t}"
            )));
        }
        let max_exp = (1u64 << e) - 2;
        // largest level is (2^{t+1} - 1) * 2^{2^e - 2} < 2^{2^e - 1 + t}
        if max_exp + u64::from(t) + 1 > 1024 {
            return Err(Error::InvalidParameter(format!(
                "float alphabet e={e}, t={t} exceeds the double-precision range"
            )));
        }
        let sig = 1u64 << t;
        let mut positive: Vec<f64> = (1..sig).map(|k| k as f64).collect();
        for j in 0..=max_exp {
            let scale = 2f64.powi(j as i32);
            positive.extend((0..sig).map(|m| (sig + m) as f64 * scale));
        }
        Self::from_positive_levels(format!("e{e}m{t}"), &positive)
    }

    /// Two's complement integers of width `b`: `-2^{b-1} ..= 2^{b-1} - 1`.
    pub fn twos_complement(b: u32) -> Result<Self> {
        if !(2..=16).contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "two's complement width must be in 2..=16, got {b}"
            )));
        }
        let half = 1i64 << (b - 1);
        let values = (-half..half).map(|k| k as f64).collect();
        Self::new(format!("int{b}"), values)
    }

    /// `{0} ∪ ±{1, R, R^2, ..., R^{m-1}}`.
    pub fn power(base: f64, levels: u32) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) || levels < 1 {
            return Err(Error::InvalidParameter(format!(
                "power alphabet needs R > 1 and m >= 1, got R={base}, m={levels}"
            )));
        }
        let mut positive = Vec::with_capacity(levels as usize);
        let mut level = 1.0;
        for _ in 0..levels {
            positive.push(level);
            level *= base;
        }
        Self::from_positive_levels(format!("power:{base},{levels}"), &positive)
    }

    /// Sign-symmetric alphabet `{0} ∪ ±levels`.
    pub fn from_positive_levels(name: impl Into<String>, levels: &[f64]) -> Result<Self> {
        if let Some(v) = levels.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Domain(format!("positive level expected, got {v}")));
        }
        let mut values = Vec::with_capacity(2 * levels.len() + 1);
        values.push(0.0);
        for &v in levels {
            values.push(v);
            values.push(-v);
        }
        Self::new(name, values)
    }

    /// Resolves a format name: `e2m1`, `e1m2`, `e3m0`, any `eXmY`, `int4`
    /// (any `intB`), or `power:R,m`.
    pub fn from_format(spec: &str) -> Result<Self> {
        let s = spec.trim().to_ascii_lowercase();
        if let Some(rest) = s.strip_prefix("power:") {
            let (r, m) = rest
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("expected power:R,m, got {spec}")))?;
            let r: f64 = r.trim().parse().map_err(|_| Error::Format(format!("bad base in {spec}")))?;
            let m: u32 = m.trim().parse().map_err(|_| Error::Format(format!("bad level count in {spec}")))?;
            return Self::power(r, m);
        }
        if let Some(rest) = s.strip_prefix("int") {
            let b: u32 = rest.parse().map_err(|_| Error::Format(format!("bad integer width in {spec}")))?;
            return Self::twos_complement(b);
        }
        if let Some(rest) = s.strip_prefix('e') {
            if let Some((e, t)) = rest.split_once('m') {
                if let (Ok(e), Ok(t)) = (e.parse(), t.parse()) {
                    return Self::float(e, t);
                }
            }
        }
        Err(Error::Format(format!("unknown alphabet format {spec:?}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("alphabet serialization is infallible")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Values in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = if x == 0.0 { 0.0 } else { x };
        self.values.binary_search_by(|v| v.total_cmp(&x)).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Strictly positive values, ascending.
    pub fn positive_values(&self) -> &[f64] {
        let start = self.values.partition_point(|&v| v <= 0.0);
        &self.values[start..]
    }

    /// Strictly negative values, ascending.
    pub fn negative_values(&self) -> &[f64] {
        let end = self.values.partition_point(|&v| v < 0.0);
        &self.values[..end]
    }

    pub fn is_mixed_sign(&self) -> bool {
        !self.positive_values().is_empty() && !self.negative_values().is_empty()
    }

    /// `A = -A` under exact equality.
    pub fn is_sign_symmetric(&self) -> bool {
        let v = &self.values;
        v.iter().zip(v.iter().rev()).all(|(a, b)| *a == -*b)
    }

    pub fn sign_counts(&self) -> SignCounts {
        let positive = self.positive_values().len();
        let negative = self.negative_values().len();
        SignCounts { positive, negative, min_count: positive.min(negative) }
    }

    /// Every value multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {lambda}")));
        }
        Self::new(self.name.clone(), self.values.iter().map(|v| v * lambda).collect())
    }

    /// Divides by the smallest positive value so that it becomes exactly 1.
    pub fn normalize(&self) -> Result<Self> {
        let p = *self
            .positive_values()
            .first()
            .ok_or_else(|| Error::Domain(format!("alphabet {} has no positive value", self.name)))?;
        Self::new(self.name.clone(), self.values.iter().map(|v| v / p).collect())
    }

    /// This alphabet with one extra value (a no-op if already present).
    pub fn with_value(&self, x: f64) -> Result<Self> {
        if self.contains(x) {
            return Ok(self.clone());
        }
        let mut values = self.values.clone();
        values.push(x);
        Self::new(self.name.clone(), values)
    }

    /// Largest ratio between adjacent positive values.
    pub fn max_consecutive_positive_ratio(&self) -> Result<f64> {
        let pos = self.positive_values();
        if pos.len() < 2 {
            return Err(Error::Domain(format!(
                "need at least 2 positive values, alphabet {} has {}",
                self.name,
                pos.len()
            )));
        }
        Ok(pos.windows(2).map(|w| w[1] / w[0]).fold(f64::MIN, f64::max))
    }

    /// Smallest `b` with `2^b >= |A|`.
    pub fn bit_width(&self) -> u32 {
        usize::BITS - (self.len() - 1).leading_zeros()
    }
}
