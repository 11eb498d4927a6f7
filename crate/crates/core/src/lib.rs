//! Directional coverage of product-structured vector codes.
//!
//! A product code takes every coordinate of a vector from one shared finite
//! scalar alphabet. This crate measures how well the normalized codewords
//! cover the unit sphere (the worst-case angle from a direction to its nearest
//! codeword), computes the closed-form bounds on that quantity, and searches
//! for alphabets that cover better than the standard low-precision formats.
//!
//! Modules:
//! - [`alphabet`]: alphabet construction (floating-point, two's complement, power families)
//! - [`geometry`]: scalar quantization and exact nearest-direction search
//! - [`exact2d`]: exact covering radii on the circle
//! - [`bounds`]: harmonic witness and analytic bounds
//! - [`estimate`]: Monte-Carlo worst-case estimation
//! - [`optimize`]: differential evolution plus Powell refinement of alphabets
//! - [`analyze`]: log-space regression and table output

pub mod alphabet;
pub mod analyze;
pub mod bounds;
pub mod error;
pub mod estimate;
pub mod exact2d;
pub mod geometry;
pub mod optimize;
pub mod parallel;

pub use alphabet::{Alphabet, SignCounts};
pub use analyze::RegressionReport;
pub use bounds::BoundReport;
pub use error::{Error, Result};
pub use estimate::{CoverageEstimate, SampleSpec};
pub use exact2d::{Dim2Case, Dim2Classification};
pub use geometry::{CodewordResult, UnitVector};
pub use optimize::{OptimizationResult, OptimizerConfig};

/// Radians to degrees.
pub fn to_degrees(rad: f64) -> f64 {
    rad * 180.0 / std::f64::consts::PI
}
