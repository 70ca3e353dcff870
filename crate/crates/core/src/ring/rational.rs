use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(rug::Rational);

impl Rational {
    pub fn zero() -> Self {
        Rational(rug::Rational::new())
    }

    pub fn one() -> Self {
        Rational::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational(rug::Rational::from(n))
    }

    /// `num / den`. Panics if `den == 0`; use [`Rational::checked_new`] for
    /// untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::checked_new(Integer::from(num), Integer::from(den)).expect("zero denominator")
    }

    pub fn checked_new(num: Integer, den: Integer) -> Option<Self> {
        if den == 0 {
            None
        } else {
            Some(Rational(rug::Rational::from((num, den))))
        }
    }

    pub fn from_integer(n: Integer) -> Self {
        Rational(rug::Rational::from(n))
    }

    pub fn from_rug(r: rug::Rational) -> Self {
        Rational(r)
    }

    pub fn as_rug(&self) -> &rug::Rational {
        &self.0
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Ordering::Less
    }

    pub fn is_integer(&self) -> bool {
        *self.denom() == 1
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.clone().abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.clone().recip()))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let num = self.numer().clone().pow(e);
        let den = self.denom().clone().pow(e);
        Rational(rug::Rational::from((num, den)))
    }

    /// `max(|numerator|, denominator)`.
    pub fn height(&self) -> Integer {
        let n = Integer::from(self.numer().abs_ref());
        if n > *self.denom() {
            n
        } else {
            self.denom().clone()
        }
    }

    /// Nearest float at the given precision.
    pub fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: Integer = num.parse().map_err(|_| bad())?;
        let den: Integer = den.parse().map_err(|_| bad())?;
        Rational::checked_new(num, den).ok_or_else(bad)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<Integer> for Rational {
    fn from(n: Integer) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(rug::Rational::from((&self.0).$method(&rhs.0)))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $assign_trait<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                self.0.$assign(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(rug::Rational::from(-&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(*r.denom(), 2);
        assert_eq!(Rational::new(0, 7), Rational::zero());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("7/4".parse::<Rational>().unwrap(), Rational::new(7, 4));
        assert_eq!(" -12 ".parse::<Rational>().unwrap(), Rational::from_int(-12));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("pi".parse::<Rational>().is_err());
    }

    #[test]
    fn height_is_max_of_parts() {
        assert_eq!(Rational::new(-7, 4).height(), 7);
        assert_eq!(Rational::new(3, 40).height(), 40);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rational::new(1, 3);
        let b = Rational::new(1, 6);
        assert_eq!(&a + &b, Rational::new(1, 2));
        assert_eq!(&a - &b, Rational::new(1, 6));
        assert_eq!(&a * &b, Rational::new(1, 18));
        assert_eq!(&a / &b, Rational::from_int(2));
        assert_eq!(Rational::new(2, 3).pow(3), Rational::new(8, 27));
    }
}
