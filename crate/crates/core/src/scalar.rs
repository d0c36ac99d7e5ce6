//! Dual arithmetic: every numeric routine in this crate is generic over a
//! [`Scalar`], instantiated either with `f64` (float mode) or with
//! [`BigRational`] (exact mode). Exact mode exists because the positive
//! semidefinite certificates this crate produces are numerically delicate
//! (Hilbert-type conditioning); rational arithmetic makes them trustworthy.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar field the library computes over. Implemented by `f64` and
/// [`BigRational`] only.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Sum
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact (no rounding, no tolerances).
    const EXACT: bool;

    /// Mode tag used in JSON documents.
    const MODE_NAME: &'static str;

    fn from_int(value: i64) -> Self;

    /// Exact embedding of a finite float (identity in float mode, dyadic
    /// rational in exact mode). Panics on non-finite input.
    fn from_f64(value: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Rejects NaN/infinity in float mode; always true in exact mode.
    fn is_finite_value(&self) -> bool;

    /// Equality test used by Hankel-structure checks: exact comparison in
    /// rational mode, `|a - b| <= tol * max(1, |a|, |b|)` in float mode.
    fn eq_within(&self, other: &Self, tol: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE_NAME: &'static str = "float";

    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn from_f64(value: f64) -> Self {
        value
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn eq_within(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(f64::abs(*self)).max(f64::abs(*other));
        f64::abs(self - other) <= tol * scale
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const MODE_NAME: &'static str = "rational";

    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_f64(value: f64) -> Self {
        BigRational::from_float(value).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn eq_within(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Exact embedding of a float into the rationals (every finite binary64
/// value is a dyadic rational).
pub fn rational_from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value).ok_or_else(|| {
        Error::Domain(format!(
            "cannot embed non-finite float {value} as a rational"
        ))
    })
}

/// Parses `"p/q"` or `"p"` (arbitrary-precision decimal integers) into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numerator: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator in {text:?}")))?;
    let denominator: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational denominator in {text:?}")))?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(numerator, denominator))
}

/// Convenience constructor for small rationals in tests and presets.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an `i64`.
pub fn rat(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}
