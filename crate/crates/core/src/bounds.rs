//! Closed-form bounds on product-code coverage.
//!
//! Everything here is a total function of its arguments. Angle-valued bounds
//! clamp their `acos` argument to `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::geometry::UnitVector;

/// Largest `n` for which [`harmonic_number`] sums directly.
pub const MAX_HARMONIC_TERMS: u64 = 10_000_000;

/// Analytic bounds for an alphabet at one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dimension: usize,
    /// Lower bound on the covering radius from sign counts, radians.
    pub lower_bound_angle: f64,
    /// Upper bound on `sqrt(H_n) * cos F_n(A)`; only for sign-symmetric
    /// alphabets containing zero.
    pub upper_bound_normalized: Option<f64>,
    pub fp_constant: f64,
    pub arbitrary_constant: f64,
}

/// `H_n = 1 + 1/2 + ... + 1/n`, summed in ascending order.
///
/// # Panics
/// If `n == 0` or `n > MAX_HARMONIC_TERMS`.
pub fn harmonic_number(n: u64) -> f64 {
    assert!(
        (1..=MAX_HARMONIC_TERMS).contains(&n),
        "harmonic number defined here for 1 <= n <= {MAX_HARMONIC_TERMS}, got {n}"
    );
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// Unit vector with coordinates `1 / sqrt(i * H_n)`, `i = 1..=n`.
pub fn harmonic_witness(n: usize) -> Result<UnitVector> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("witness dimension must be >= 2, got {n}")));
    }
    let h = harmonic_number(n as u64);
    UnitVector::new((1..=n).map(|i| 1.0 / (i as f64 * h).sqrt()).collect())
}

/// `acos(min(1, 2 sqrt(m(A) / H_n)))`; `pi/2` for single-sign alphabets.
pub fn sign_count_lower_bound(a: &Alphabet, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {n}")));
    }
    let m = a.sign_counts().min_count as f64;
    let h = harmonic_number(n as u64);
    Ok((2.0 * (m / h).sqrt()).clamp(0.0, 1.0).acos())
}

/// `1 + sum_j (c_j - c_{j+1}) / (c_j + c_{j+1})` for `c_1 > ... > c_m > 0`.
///
/// This equals `c^T Q^{-1} c` with `Q_ij = c_{max(i,j)}^2`.
pub fn quadratic_form_value(c: &[f64]) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::Domain("empty level sequence".into()));
    }
    if c.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("levels must be positive and finite".into()));
    }
    if c.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain("levels must be strictly decreasing".into()));
    }
    Ok(1.0 + c.windows(2).map(|w| (w[0] - w[1]) / (w[0] + w[1])).sum::<f64>())
}

/// n-independent bound `2 sqrt(c^T Q^{-1} c)` on `sqrt(H_n) * cos F_n(A)` for
/// `A = {0} ∪ ±{c_1, ..., c_m}`.
pub fn sign_symmetric_upper_bound(a: &Alphabet) -> Result<f64> {
    if !a.is_sign_symmetric() || !a.contains_zero() {
        return Err(Error::Domain(format!(
            "alphabet {} is not sign-symmetric with zero",
            a.name()
        )));
    }
    let desc: Vec<f64> = a.positive_values().iter().rev().copied().collect();
    Ok(2.0 * quadratic_form_value(&desc)?.sqrt())
}

fn check_bits(b: u32, min: u32) -> Result<()> {
    if b < min || b > 62 {
        return Err(Error::InvalidParameter(format!("bit width must be in {min}..=62, got {b}")));
    }
    Ok(())
}

/// `2 sqrt((2^{b-1} + 1) / 3)`: asymptotic ceiling of the normalized deficit
/// for b-bit floating-point alphabets.
pub fn fp_obstruction_constant(b: u32) -> Result<f64> {
    check_bits(b, 2)?;
    let half = (1u64 << (b - 1)) as f64;
    Ok(2.0 * ((half + 1.0) / 3.0).sqrt())
}

/// `2 sqrt(2^{b-1} - 1)`: asymptotic floor of the normalized deficit for the
/// best b-bit alphabets.
pub fn arbitrary_lower_constant(b: u32) -> Result<f64> {
    check_bits(b, 2)?;
    let half = (1u64 << (b - 1)) as f64;
    Ok(2.0 * (half - 1.0).sqrt())
}

/// `arbitrary_lower_constant(b) / fp_obstruction_constant(b)`, for `b >= 3`.
pub fn deficit_ratio(b: u32) -> Result<f64> {
    check_bits(b, 3)?;
    Ok(arbitrary_lower_constant(b)? / fp_obstruction_constant(b)?)
}

/// `(sum_{i<=m} 1/sqrt(i), 2 sqrt(m))`.
pub fn partial_sum_check(m: u64) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let sum = (1..=m).map(|i| 1.0 / (i as f64).sqrt()).sum();
    Ok((sum, 2.0 * (m as f64).sqrt()))
}

/// All bounds for `a` at dimension `n`; constants use `a.bit_width()`.
pub fn bound_report(a: &Alphabet, n: usize) -> Result<BoundReport> {
    let b = a.bit_width().max(2);
    Ok(BoundReport {
        dimension: n,
        lower_bound_angle: sign_count_lower_bound(a, n)?,
        upper_bound_normalized: sign_symmetric_upper_bound(a).ok(),
        fp_constant: fp_obstruction_constant(b)?,
        arbitrary_constant: arbitrary_lower_constant(b)?,
    })
}
