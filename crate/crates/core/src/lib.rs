//! Exact and numerical toolkit for toric scalar-flat Kähler geometry:
//! Hirzebruch-Jung continued fractions and fiber chains, the log-term and
//! mass of ALE metrics on cyclic quotient resolutions, parabolic stability of
//! ruled surfaces with the gluing-feasibility pipeline built on it, and a
//! numerical evaluator for the explicit monopole-ansatz metrics.
//!
//! The arithmetic kernels are generic: integers over [`cfrac::HjInt`], exact
//! fields over [`scalar::Exact`], floats over [`scalar::Real`]. The aliases
//! below fix the concrete types used by the pipeline and the CLI.

// index loops mirror the tensor formulas; `!(x > 0)` is how NaN gets rejected
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cfrac;
pub mod document;
pub mod error;
pub mod gluing;
pub mod logmass;
pub mod lp;
pub mod metricnum;
pub mod parabolic;
pub mod resolution;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

/// Small exact fractions (weights, slopes).
pub type Fraction = num_rational::Ratio<i64>;

/// Arbitrary-precision rationals for sums that can grow.
pub type Rational = num_rational::BigRational;

pub type HjExpansion = cfrac::HjExpansion<i64>;
pub type MonopoleData = logmass::MonopoleData<Rational>;
pub type Level = logmass::Level<Rational>;
pub type LogCoefficients = logmass::LogCoefficients<Rational>;
pub type MassVerdict = logmass::MassVerdict<Rational>;
pub type NumericMonopole = metricnum::NumericMonopole<f64>;
pub type MetricSample = metricnum::MetricSample<f64>;

/// Library version, stamped into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
