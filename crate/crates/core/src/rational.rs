//! Exact fractions for densities, average degrees and slack values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a rational (expected `p` or `p/q` with q > 0)")]
pub struct ParseRationalError(String);

/// A reduced fraction with positive denominator.
///
/// Ordering compares `a/b` against `c/d` as `a*d` against `c*b` in 128-bit
/// arithmetic, so it never rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));

    /// Panics when `denominator == 0`.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Rational(Ratio::new(numerator, denominator))
    }

    pub fn integer(value: i64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.numerator() > 0
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        self.numerator().div_euclid(self.denominator())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> i64 {
        -(-self.numerator()).div_euclid(self.denominator())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator() as i128 * other.denominator() as i128;
        let rhs = other.numerator() as i128 * self.denominator() as i128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational::integer(value as i64)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;

            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// `p/q`, or just `p` when `q == 1`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| err())?,
                q.trim().parse::<i64>().map_err(|_| err())?,
            ),
            None => (s.trim().parse::<i64>().map_err(|_| err())?, 1),
        };
        if q <= 0 {
            return Err(err());
        }
        Ok(Rational::new(p, q))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(Rational::new(6, 4).to_string(), "3/2");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
        assert_eq!(Rational::new(1, -2).to_string(), "-1/2");
        assert_eq!("3/2".parse::<Rational>().unwrap(), Rational::new(3, 2));
        assert_eq!(" 7 ".parse::<Rational>().unwrap(), Rational::integer(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Rational::new(3, 2).floor(), 1);
        assert_eq!(Rational::new(3, 2).ceil(), 2);
        assert_eq!(Rational::new(-3, 2).floor(), -2);
        assert_eq!(Rational::new(-3, 2).ceil(), -1);
        assert_eq!(Rational::integer(4).ceil(), 4);
    }

    proptest! {
        #[test]
        fn order_matches_float_order_when_far_apart(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            let (fx, fy) = (a as f64 / b as f64, c as f64 / d as f64);
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            } else {
                prop_assert_eq!(x, y);
            }
        }

        #[test]
        fn always_reduced(a in -10_000i64..10_000, b in 1i64..10_000) {
            let r = Rational::new(a, b);
            prop_assert!(r.denominator() > 0);
            prop_assert_eq!(num_integer_gcd(r.numerator().abs(), r.denominator()), 1);
        }
    }

    fn num_integer_gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.max(1)
    }
}
