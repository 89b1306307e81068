//! Scalar traits the rest of the crate is generic over.
//!
//! Exact kernels (continued fractions, log coefficients, the positive-kernel
//! linear program) are written against [`Exact`]; numerical metric code is
//! written against [`Real`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits as nt;

/// An exact ordered field: rationals of some integer width.
pub trait Exact:
    Clone + Debug + Display + PartialOrd + nt::Num + nt::Signed + nt::ToPrimitive
{
    /// Builds `num / den`. Panics if `den == 0`.
    fn from_ints(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ints(n, 1)
    }

    fn from_fraction(f: &Ratio<i64>) -> Self {
        Self::from_ints(*f.numer(), *f.denom())
    }

    /// Closest `f64`; NaN if the value does not fit.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Exact for Ratio<i64> {
    fn from_ints(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Exact for Ratio<i128> {
    fn from_ints(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

impl Exact for BigRational {
    fn from_ints(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Floating point scalars usable in the metric evaluator.
pub trait Real: Copy + Debug + Display + Send + Sync + nt::Float + nt::FloatConst {
    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
}
