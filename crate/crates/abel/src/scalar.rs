//! Scalar abstraction shared by the polynomial and trigonometric layers.
//!
//! Two scalars are supported: `f64` for numeric work and [`Rat`]
//! (arbitrary-precision rationals) for decisions that must be made without
//! rounding. Conversion between the two is always explicit; nothing in the
//! crate silently promotes a float computation to an "exact" result.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational scalar used on the exact path.
pub type Rat = BigRational;

/// Field-like scalar with the handful of extras the algebra layer needs.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic in this scalar is exact (no rounding).
    const EXACT: bool;

    fn from_int(n: i64) -> Self;

    /// Lossy view as a double. For [`Rat`] this rounds to nearest.
    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Sign as an integer: -1, 0 or +1.
    fn signum_int(&self) -> i8;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn signum_int(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn signum_int(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.numer().sign() == num_bigint::Sign::Minus {
            -1
        } else {
            1
        }
    }
}

/// Exact rational from a finite double (every finite `f64` is a dyadic
/// rational). Returns `None` for NaN or infinities.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a real written as `p/q`, as a plain integer, or as a decimal string
/// (`-1.25`). All three forms are exact.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        if frac_part.is_empty() {
            return Some(Rat::from_integer(int_digits));
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(frac, scale);
        let int = Rat::from_integer(int_digits);
        return Some(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-7"), Some(rat(-7, 1)));
        assert_eq!(parse_rational("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rational("0.5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        let r = rat_from_f64(0.1).unwrap();
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert!(rat_from_f64(f64::NAN).is_none());
    }

    #[test]
    fn signum() {
        assert_eq!(rat(-3, 7).signum_int(), -1);
        assert_eq!(rat(0, 1).signum_int(), 0);
        assert_eq!(2.5f64.signum_int(), 1);
    }
}
