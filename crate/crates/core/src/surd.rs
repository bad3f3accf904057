//! Exact quadratic surds `a + b·√d`.
//!
//! Inverting a point of the von Roos or class-I region takes a square root of
//! a rational, which is rarely rational itself. Carrying the result as a surd
//! keeps every downstream weighted mean exact: the means of interest collapse
//! back to rationals (the `√d` parts cancel), and that cancellation is checked
//! with `==` rather than a tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{Rational, Scalar};

/// `rational + coeff·√radicand`, with `radicand` square-free (see
/// [`square_free_split`] for the one caveat) and `radicand == 1` whenever
/// `coeff == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    rational: Rational,
    coeff: Rational,
    radicand: BigInt,
}

impl Surd {
    /// Builds `a + b·√d` and normalizes the radicand. `d` must be non-negative.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "negative radicand {d}");
        if b.is_zero() || d.is_zero() {
            return Self::rational(a);
        }
        let (square, rest) = square_free_split(d.magnitude());
        let b = b * Rational::from_integer(BigInt::from(square));
        if rest.is_one() {
            return Self::rational(a + b);
        }
        Surd {
            rational: a,
            coeff: b,
            radicand: BigInt::from(rest),
        }
    }

    pub fn rational(a: Rational) -> Self {
        Surd {
            rational: a,
            coeff: Rational::zero(),
            radicand: BigInt::one(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational.clone())
    }

    fn conjugate(&self) -> Self {
        Surd {
            rational: self.rational.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// `a² − b²d`, the field norm; rational by construction.
    fn norm(&self) -> Rational {
        let d = Rational::from_integer(self.radicand.clone());
        &self.rational * &self.rational - &self.coeff * &self.coeff * d
    }

    fn shared_radicand(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.radicand.clone(),
            (_, true) => self.radicand.clone(),
            _ => {
                assert_eq!(
                    self.radicand, other.radicand,
                    "surds from different quadratic fields"
                );
                self.radicand.clone()
            }
        }
    }

    fn signum(&self) -> Ordering {
        let sa = self.rational.cmp(&Rational::zero());
        let sb = self.coeff.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: the larger magnitude wins. a² = b²d is impossible
        // for a non-square radicand.
        let a2 = &self.rational * &self.rational;
        let b2d = &self.coeff * &self.coeff * Rational::from_integer(self.radicand.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::rational(r)
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeff.is_zero()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::rational(Rational::one())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let d = self.shared_radicand(&rhs);
        Surd::new(self.rational + rhs.rational, self.coeff + rhs.coeff, d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let d = self.shared_radicand(&rhs);
        let dr = Rational::from_integer(d.clone());
        let a = &self.rational * &rhs.rational + &self.coeff * &rhs.coeff * dr;
        let b = &self.rational * &rhs.coeff + &self.coeff * &rhs.rational;
        Surd::new(a, b, d)
    }
}

impl Div for Surd {
    type Output = Surd;
    /// Panics on a zero divisor, like the underlying rationals.
    fn div(self, rhs: Surd) -> Surd {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero surd");
        let num = self * rhs.conjugate();
        Surd::new(num.rational / &norm, num.coeff / &norm, num.radicand)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let compatible =
            self.is_rational() || other.is_rational() || self.radicand == other.radicand;
        if compatible {
            Some((self.clone() - other.clone()).signum())
        } else {
            self.to_f64().partial_cmp(&other.to_f64())
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational);
        }
        let mag = self.coeff.abs();
        let root = if mag.is_one() {
            format!("sqrt({})", self.radicand)
        } else {
            format!("{mag}*sqrt({})", self.radicand)
        };
        let negative = self.coeff.is_negative();
        if self.rational.is_zero() {
            write!(f, "{}{root}", if negative { "-" } else { "" })
        } else {
            write!(f, "{} {} {root}", self.rational, if negative { "-" } else { "+" })
        }
    }
}

impl Scalar for Surd {
    fn from_rational(r: &Rational) -> Self {
        Surd::rational(r.clone())
    }

    fn to_f64(&self) -> f64 {
        let a = Scalar::to_f64(&self.rational);
        if self.is_rational() {
            return a;
        }
        let b = Scalar::to_f64(&self.coeff);
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }
}

/// Exact square root of a non-negative rational; `None` for negative input.
pub fn sqrt_rational(r: &Rational) -> Option<Surd> {
    if r.is_negative() {
        return None;
    }
    // √(p/q) = √(pq) / q
    let (p, q) = (r.numer(), r.denom());
    let inv_q = Rational::new(BigInt::one(), q.clone());
    Some(Surd::new(Rational::zero(), inv_q, p * q))
}

/// Splits `n = s²·d` with `d` square-free.
///
/// Trial division runs up to the cube root of the unfactored part, after
/// which the remainder has at most two prime factors and is either prime,
/// a product of two distinct primes, or a perfect square. Beyond
/// `TRIAL_LIMIT` the remainder is only tested for being a perfect square,
/// so `d` may keep a square factor for inputs with huge prime factors; the
/// value represented is unaffected.
pub fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    const TRIAL_LIMIT: u64 = 2_000_000;
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp * &bp > rest {
            break;
        }
        let mut exp = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            exp += 1;
        }
        if exp > 0 {
            square *= bp.pow(exp / 2);
            if exp % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
    } else {
        free *= rest;
    }
    (square, free)
}

/// Scalars that can take square roots of their non-negative elements,
/// landing in a (possibly larger) scalar type.
pub trait SqrtField: Scalar {
    type Root: Scalar;

    fn lift(&self) -> Self::Root;

    /// `None` when `self < 0`.
    fn sqrt_root(&self) -> Option<Self::Root>;
}

impl SqrtField for Rational {
    type Root = Surd;

    fn lift(&self) -> Surd {
        Surd::rational(self.clone())
    }

    fn sqrt_root(&self) -> Option<Surd> {
        sqrt_rational(self)
    }
}

impl SqrtField for f64 {
    type Root = f64;

    fn lift(&self) -> f64 {
        *self
    }

    fn sqrt_root(&self) -> Option<f64> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl SqrtField for f32 {
    type Root = f32;

    fn lift(&self) -> f32 {
        *self
    }

    fn sqrt_root(&self) -> Option<f32> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn split(n: u64) -> (u64, u64) {
        let (s, d) = square_free_split(&BigUint::from(n));
        (s.to_u64().unwrap(), d.to_u64().unwrap())
    }

    #[test]
    fn square_free_split_small() {
        assert_eq!(split(1), (1, 1));
        assert_eq!(split(8), (2, 2));
        assert_eq!(split(72), (6, 2));
        assert_eq!(split(49), (7, 1));
        assert_eq!(split(30), (1, 30));
        // 1_000_003 is prime; its square is caught by the perfect-square test
        assert_eq!(split(1_000_003 * 1_000_003 * 12), (2 * 1_000_003, 3));
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        assert_eq!(sqrt_rational(&ratio(1, 16)).unwrap(), Surd::rational(ratio(1, 4)));
        assert_eq!(sqrt_rational(&ratio(9, 4)).unwrap(), Surd::rational(ratio(3, 2)));
        assert!(sqrt_rational(&ratio(-1, 4)).is_none());
    }

    #[test]
    fn sqrt_squares_back() {
        for (p, q) in [(1, 2), (2, 3), (5, 12), (7, 50), (1, 72)] {
            let r = ratio(p, q);
            let s = sqrt_rational(&r).unwrap();
            assert!(!s.is_rational());
            assert_eq!(s.clone() * s, Surd::rational(r));
        }
    }

    #[test]
    fn conjugate_pair_sum_and_product_are_rational() {
        let x = ratio(-1, 5);
        let root = sqrt_rational(&ratio(1, 50)).unwrap();
        let a = Surd::rational(x.clone()) + root.clone();
        let g = Surd::rational(x.clone()) - root;
        assert_eq!((a.clone() + g.clone()).to_rational(), Some(ratio(-2, 5)));
        assert_eq!((a * g).to_rational(), Some(ratio(1, 25) - ratio(1, 50)));
    }

    #[test]
    fn ordering_matches_floats() {
        let r2 = sqrt_rational(&ratio(2, 1)).unwrap();
        let cases = [
            Surd::rational(ratio(3, 2)) - r2.clone(),
            Surd::rational(ratio(-3, 2)) + r2.clone(),
            r2.clone(),
            -r2.clone(),
            Surd::rational(ratio(7, 5)) - r2.clone(),
            Surd::rational(ratio(71, 50)) - r2,
        ];
        for a in &cases {
            for b in &cases {
                assert_eq!(
                    a.partial_cmp(b),
                    a.to_f64().partial_cmp(&b.to_f64()),
                    "{a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let r3 = sqrt_rational(&ratio(3, 1)).unwrap();
        let a = Surd::rational(ratio(1, 2)) + r3.clone();
        let b = Surd::rational(ratio(-2, 7)) - r3 * Surd::rational(ratio(1, 3));
        assert_eq!((a.clone() * b.clone()) / b, a);
    }

    #[test]
    fn display_forms() {
        let r2 = sqrt_rational(&ratio(1, 2)).unwrap();
        assert_eq!(r2.to_string(), "1/2*sqrt(2)");
        let x = Surd::rational(ratio(-1, 4)) - r2.clone();
        assert_eq!(x.to_string(), "-1/4 - 1/2*sqrt(2)");
        assert_eq!(sqrt_rational(&ratio(3, 1)).unwrap().to_string(), "sqrt(3)");
        assert_eq!((-sqrt_rational(&ratio(3, 1)).unwrap()).to_string(), "-sqrt(3)");
    }
}
