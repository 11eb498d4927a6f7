//! Log-space comparison of alphabets and table output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::estimate::CoverageEstimate;

/// Unit-slope fit of `ln(reference)` against `ln(alphabet)` over paired
/// positive levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    /// Mean of `ln ref_k - ln a_k`; a pure rescaling shows up only here.
    pub intercept: f64,
    pub rms_residual: f64,
    /// `(alphabet level, reference level)` in ascending order.
    pub paired_levels: Vec<(f64, f64)>,
}

/// Pairs the sorted positive levels of two sign-symmetric alphabets and fits
/// `ln ref = ln a + intercept`.
pub fn unit_slope_regression(a: &Alphabet, reference: &Alphabet) -> Result<RegressionReport> {
    for x in [a, reference] {
        if !x.is_sign_symmetric() {
            return Err(Error::Domain(format!("alphabet {} is not sign-symmetric", x.name())));
        }
    }
    let (pa, pr) = (a.positive_values(), reference.positive_values());
    if pa.len() != pr.len() || pa.is_empty() {
        return Err(Error::Domain(format!(
            "level counts differ: {} has {}, {} has {}",
            a.name(),
            pa.len(),
            reference.name(),
            pr.len()
        )));
    }
    let diffs: Vec<f64> = pa.iter().zip(pr).map(|(x, r)| r.ln() - x.ln()).collect();
    let m = diffs.len() as f64;
    let intercept = diffs.iter().sum::<f64>() / m;
    let rms_residual = (diffs.iter().map(|d| (d - intercept).powi(2)).sum::<f64>() / m).sqrt();
    Ok(RegressionReport {
        intercept,
        rms_residual,
        paired_levels: pa.iter().copied().zip(pr.iter().copied()).collect(),
    })
}

/// Formats `x` with three significant figures, keeping trailing zeros.
pub fn format_sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.2}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (2 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit, e.g. 9.996 -> "10.00"
    let rounded: f64 = s.parse().unwrap_or(x);
    let m2 = rounded.abs().log10().floor() as i32;
    if m2 != magnitude {
        let decimals = (2 - m2).max(0) as usize;
        return format!("{x:.decimals$}");
    }
    s
}

/// CSV grid of worst-case angles in degrees: one row per alphabet (in first
/// appearance order), one column per dimension (ascending).
pub fn make_table1(estimates: &[CoverageEstimate]) -> Result<String> {
    if estimates.is_empty() {
        return Err(Error::Domain("no estimates to tabulate".into()));
    }
    let mut rows: Vec<&str> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for e in estimates {
        if !rows.contains(&e.alphabet_name.as_str()) {
            rows.push(&e.alphabet_name);
        }
        if !dims.contains(&e.dimension) {
            dims.push(e.dimension);
        }
    }
    dims.sort_unstable();
    let mut out = String::from("format");
    for d in &dims {
        write!(out, ",d={d}").unwrap();
    }
    out.push('\n');
    for row in rows {
        out.push_str(row);
        for &d in &dims {
            let cell = estimates
                .iter()
                .find(|e| e.alphabet_name == row && e.dimension == d)
                .ok_or_else(|| Error::Domain(format!("missing cell ({row}, d={d})")))?;
            write!(out, ",{}", format_sig3(cell.max_angle_deg())).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
