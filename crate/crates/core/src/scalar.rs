//! Scalar abstraction shared by the ordering algebra and the classifier.
//!
//! The algebra is written once over [`Scalar`] and instantiated with exact
//! rationals (the default everywhere a value is user-visible), quadratic surds
//! (inverse constructions that need a square root) and `f32`/`f64` (float mode).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::RationalParseError;

/// Exact arbitrary-precision fraction. Always normalized: positive
/// denominator, coprime numerator and denominator.
pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality used by constraint checks. Exact for exact types; float types
    /// compare with a small relative tolerance.
    fn coincides(&self, other: &Self) -> bool {
        self == other
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

/// `a <= b`, treating coincident values as equal.
pub fn le<S: Scalar>(a: &S, b: &S) -> bool {
    a < b || a.coincides(b)
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn coincides(&self, other: &Self) -> bool {
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= 1e-12 * scale
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn coincides(&self, other: &Self) -> bool {
        let scale = 1.0_f32.max(self.abs()).max(other.abs());
        (self - other).abs() <= 1e-5 * scale
    }
}

/// Parses `-3`, `7/2`, `-1/4`. Decimal notation is rejected: values that
/// must stay exact never pass through a float.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    let bad = || RationalParseError(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let int = |t: &str, signed: bool| -> Result<BigInt, RationalParseError> {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    let n = int(num, true)?;
    let d = match den {
        Some(d) => int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `Rational` from a small numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact division, `None` on a zero divisor.
pub fn checked_div(a: &Rational, b: &Rational) -> Option<Rational> {
    if b.is_zero() {
        None
    } else {
        Some(a / b)
    }
}
