//! Coefficient fields for cross-section polynomials.
//!
//! Every closed-form term of the expansion is generic over [`Scalar`], so the
//! same code path runs with `f64` for runtime fields and with exact
//! [`BigRational`] for structural verification.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// A field usable as polynomial coefficients.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `num / den` in this field.
    fn ratio(num: i64, den: i64) -> Self;

    /// Conversion from a float. Exact for the rational field, since every
    /// finite `f64` is a dyadic rational.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Whether the field is exact; float fields compare against tolerances.
    const EXACT: bool;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn pown(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

/// Shorthand for `T::ratio`.
pub fn r<T: Scalar>(num: i64, den: i64) -> T {
    T::ratio(num, den)
}
