//! Exact covering radii on the circle and the dimension-2 classification.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::geometry::{UnitVector, MAX_ENUMERATION};

/// Which side of the dimension-2 dichotomy an alphabet falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim2Case {
    /// `A = {-c, c}`: the four directions are equally spaced.
    AntipodalOptimal,
    /// Every other alphabet is strictly worse than the best `q^2`-point circle code.
    StrictlySuboptimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dim2Classification {
    pub case: Dim2Case,
    /// Exact covering radius of the 2-D product code, radians.
    pub f2_value: f64,
    /// `pi / q^2`, the optimum for a circle code with as many points.
    pub sph_value: f64,
}

/// Half the largest cyclic gap between sorted angles in `[0, 2pi)`.
fn covering_radius_angles(angles: &mut [f64]) -> f64 {
    angles.sort_unstable_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[angles.len() - 1];
    let largest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    0.5 * largest
}

fn polar_angle(x: f64, y: f64) -> f64 {
    let t = y.atan2(x);
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Covering radius of a finite set of points on the unit circle.
pub fn covering_radius_circle(points: &[UnitVector]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Domain("covering radius of an empty point set".into()));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != 2) {
        return Err(Error::Domain(format!("point of dimension {} is not on the circle", p.dim())));
    }
    let mut angles: Vec<f64> = points.iter().map(|p| polar_angle(p.coords()[0], p.coords()[1])).collect();
    Ok(covering_radius_angles(&mut angles))
}

/// Exact `F_2(A)`: the covering radius of the 2-D direction set.
///
/// Angles of all nonzero codewords are computed directly; coincident
/// directions only add zero-width gaps, so no deduplication is needed.
pub fn f2_exact(a: &Alphabet) -> Result<f64> {
    let q = a.len() as u64;
    if q * q > MAX_ENUMERATION {
        return Err(Error::Resource(format!("q^2 = {} exceeds {MAX_ENUMERATION}", q * q)));
    }
    let v = a.values();
    let mut angles = Vec::with_capacity((q * q) as usize);
    for &x in v {
        for &y in v {
            if x != 0.0 || y != 0.0 {
                angles.push(polar_angle(x, y));
            }
        }
    }
    Ok(covering_radius_angles(&mut angles))
}

/// Structural test for `A = {-c, c}`, checked on the normalized alphabet.
fn is_antipodal_pair(a: &Alphabet) -> bool {
    let v = a.values();
    v.len() == 2
        && v[0] < 0.0
        && v[1] > 0.0
        && a.normalize().map(|n| (n.values()[0] + n.values()[1]).abs() <= 1e-12).unwrap_or(false)
}

pub fn classify_dim2(a: &Alphabet) -> Result<Dim2Classification> {
    let q = a.len() as f64;
    let case = if is_antipodal_pair(a) { Dim2Case::AntipodalOptimal } else { Dim2Case::StrictlySuboptimal };
    Ok(Dim2Classification { case, f2_value: f2_exact(a)?, sph_value: PI / (q * q) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_directions;
    use std::f64::consts::FRAC_PI_4;

    fn alpha(v: &[f64]) -> Alphabet {
        Alphabet::new("t", v.to_vec()).unwrap()
    }

    #[test]
    fn circle_examples() {
        let eight: Vec<UnitVector> = (0..8)
            .map(|k| {
                let t = k as f64 * TAU / 8.0;
                UnitVector::new(vec![t.cos(), t.sin()]).unwrap()
            })
            .collect();
        assert!((covering_radius_circle(&eight).unwrap() - PI / 8.0).abs() < 1e-12);
        let one = [UnitVector::new(vec![1.0, 0.0]).unwrap()];
        assert!((covering_radius_circle(&one).unwrap() - PI).abs() < 1e-12);
        let four: Vec<UnitVector> = [(1., 0.), (0., 1.), (-1., 0.), (0., -1.)]
            .iter()
            .map(|&(x, y)| UnitVector::new(vec![x, y]).unwrap())
            .collect();
        assert!((covering_radius_circle(&four).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!(covering_radius_circle(&[]).is_err());
    }

    #[test]
    fn f2_examples() {
        assert!((f2_exact(&alpha(&[-1., 1.])).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!(f2_exact(&alpha(&[-2., 1.])).unwrap() > FRAC_PI_4);
        assert!(f2_exact(&alpha(&[-3., -2., -1., 0., 1., 2., 3.])).unwrap() > PI / 49.0);
        for c in [0.1, 1.0, 17.0] {
            assert!((f2_exact(&alpha(&[-c, c])).unwrap() - FRAC_PI_4).abs() < 1e-12);
        }
    }

    #[test]
    fn f2_matches_enumerated_directions() {
        for a in [alpha(&[-2., 1.]), Alphabet::float(2, 1).unwrap(), alpha(&[0., 1., 5.])] {
            let dirs = enumerate_directions(&a, 2).unwrap();
            let via_dirs = covering_radius_circle(&dirs).unwrap();
            assert!((via_dirs - f2_exact(&a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_dim2(&alpha(&[-3., 3.])).unwrap();
        assert_eq!(c.case, Dim2Case::AntipodalOptimal);
        assert!((c.f2_value - FRAC_PI_4).abs() < 1e-12);
        assert!((c.f2_value - c.sph_value).abs() < 1e-12);
        let c = classify_dim2(&alpha(&[-1., 2.])).unwrap();
        assert_eq!(c.case, Dim2Case::StrictlySuboptimal);
        assert!(c.f2_value > c.sph_value);
        let c = classify_dim2(&Alphabet::twos_complement(4).unwrap()).unwrap();
        assert_eq!(c.case, Dim2Case::StrictlySuboptimal);
        assert!(c.f2_value > c.sph_value);
        assert_eq!(classify_dim2(&alpha(&[1., 2.])).unwrap().case, Dim2Case::StrictlySuboptimal);
    }

    #[test]
    fn resource_guard() {
        let big = Alphabet::new("big", (0..3200).map(|k| k as f64 - 1600.0).collect()).unwrap();
        assert!(matches!(f2_exact(&big), Err(Error::Resource(_))));
    }
}
