//! Exact rational arithmetic.
//!
//! Every size, load and threshold in this crate is an exact fraction with
//! arbitrary-precision integers; nothing in a packing decision ever rounds.
//! The adversary constructions rely on strict orderings between sizes whose
//! denominators grow like `2n^i`, far past any fixed-width type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// An exact fraction, stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `self^exp` for non-negative integer exponents.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = BigRational::one();
        for _ in 0..exp {
            acc *= &self.0;
        }
        Rational(acc)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Smallest integer `>= self`, as a usize. Panics on negative values.
    pub fn ceil_usize(&self) -> usize {
        let c = self.0.ceil();
        c.to_integer()
            .to_usize()
            .expect("ceil of a non-negative rational fits usize")
    }

    /// Largest integer `<= self`, as a usize. Panics on negative values.
    pub fn floor_usize(&self) -> usize {
        let c = self.0.floor();
        c.to_integer()
            .to_usize()
            .expect("floor of a non-negative rational fits usize")
    }

    /// Lossy conversion for display purposes only; never used in decisions.
    pub fn to_f64(&self) -> f64 {
        let num = self.0.numer().to_f64().unwrap_or(f64::NAN);
        let den = self.0.denom().to_f64().unwrap_or(f64::NAN);
        if num.is_finite() && den.is_finite() {
            num / den
        } else {
            // Fall back to a scaled division when the parts overflow f64.
            let scaled = (&self.0 * BigInt::from(1_000_000_000i64)).to_integer();
            scaled.to_f64().unwrap_or(f64::NAN) / 1e9
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`. Decimal notation is rejected to
    /// keep every value exact.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty rational".into()));
        }
        if s.contains('.') {
            return Err(Error::Parse(format!(
                "decimal notation not accepted, use p/q: {s:?}"
            )));
        }
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s)
            .map_err(|e| Error::Parse(format!("bad numerator {num_s:?}: {e}")))?;
        let den = BigInt::from_str(den_s)
            .map_err(|e| Error::Parse(format!("bad denominator {den_s:?}: {e}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Shorthand used throughout tests and constructions.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_render() {
        assert_eq!("1/2".parse::<Rational>().unwrap(), rat(1, 2));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::from_int(3));
        assert_eq!("-4/6".parse::<Rational>().unwrap(), rat(-2, 3));
        assert_eq!(rat(6, 4).to_string(), "3/2");
        assert_eq!(rat(8, 4).to_string(), "2");
        assert!("0.5".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let a = rat(1, 3);
        let b = rat(1, 6);
        assert_eq!(&a + &b, rat(1, 2));
        assert_eq!(&a - &b, rat(1, 6));
        assert_eq!(&a * &b, rat(1, 18));
        assert_eq!(&a / &b, rat(2, 1));
        assert_eq!(rat(1, 2).pow(3), rat(1, 8));
    }

    #[test]
    fn ceil_usize() {
        assert_eq!(rat(5, 4).ceil_usize(), 2);
        assert_eq!(rat(3, 1).ceil_usize(), 3);
        assert_eq!(Rational::zero().ceil_usize(), 0);
    }

    #[test]
    fn big_denominators_stay_exact() {
        // 1/2 - 1/(2 * 150^101) must compare strictly below 1/2.
        let n = Rational::from_int(150);
        let tiny = Rational::one() / (Rational::from_int(2) * n.pow(101));
        let v = rat(1, 2) - &tiny;
        assert!(v < rat(1, 2));
        assert!(&v + &tiny == rat(1, 2));
    }

    proptest! {
        #[test]
        fn roundtrip(num in -10_000i64..10_000, den in 1i64..10_000) {
            let r = Rational::new(num, den);
            let back: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn ordering_matches_cross_multiplication(
            a in -1000i64..1000, b in 1i64..1000,
            c in -1000i64..1000, d in 1i64..1000,
        ) {
            let lhs = Rational::new(a, b);
            let rhs = Rational::new(c, d);
            prop_assert_eq!(lhs.cmp(&rhs), (a * d).cmp(&(c * b)));
        }
    }
}
