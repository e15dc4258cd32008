//! Exact half-integer arithmetic.
//!
//! Angular momentum labels `j`, `m` and the monopole index `s` all live in
//! `½ℤ`. They are stored as twice their value so that every comparison and
//! sum is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    /// `j(j+1)`, exact as a rational `twice(twice+2)/4`.
    pub fn casimir(self) -> f64 {
        let t = self.twice as f64;
        t * (t + 2.0) / 4.0
    }

    /// Integer value of `self`, if it is one.
    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }

    /// `(-1)^self` for integer `self`.
    pub fn parity_sign(self) -> f64 {
        debug_assert!(self.is_integer());
        if (self.twice / 2).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Exact conversion from a rational; fails unless the denominator divides 2.
    pub fn try_from_rational(r: &BigRational) -> Option<Self> {
        let doubled = r * BigRational::from_integer(BigInt::from(2));
        if doubled.is_integer() {
            doubled.to_integer().to_i64().map(HalfInt::from_twice)
        } else {
            None
        }
    }
}

/// Parses an exact rational from `"p/q"`, an integer, or a terminating decimal.
pub fn parse_rational(input: &str) -> Result<BigRational, Error> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let t = input.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err("not a rational literal"));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err("bad digits"))?
    };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_rational(s)?;
        HalfInt::try_from_rational(&r).ok_or_else(|| Error::Parse {
            input: s.to_string(),
            reason: "not a multiple of 1/2".to_string(),
        })
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.twice += rhs.twice;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.twice -= rhs.twice;
    }
}

/// Iterates `from, from+1, …` up to and including `to`.
pub fn integer_steps(from: HalfInt, to: HalfInt) -> impl Iterator<Item = HalfInt> {
    let (a, b) = (from.twice, to.twice);
    (0..)
        .map(move |k| HalfInt::from_twice(a + 2 * k))
        .take_while(move |h| h.twice <= b)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().abs();
    let d = r.denom().abs();
    // Integer quotient carrying ~64 significant bits, then rescale by 2^k.
    let k = n.bits() as i64 - d.bits() as i64 - 64;
    let q = if k >= 0 {
        &n / (&d << (k as u64))
    } else {
        (&n << ((-k) as u64)) / &d
    };
    let mag = q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(k as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `sign(r) * sqrt(|r|)` for an exact rational, correctly rounded to f64
/// up to the final square root.
pub(crate) fn signed_sqrt_rational(r: &BigRational) -> f64 {
    let mag = rational_to_f64(&r.abs()).sqrt();
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert_eq!("0.5".parse::<HalfInt>().unwrap(), HalfInt::HALF);
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert!("abc".parse::<HalfInt>().is_err());
        assert!("1/0".parse::<HalfInt>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for t in -7..=7 {
            let h = HalfInt::from_twice(t);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }

    #[test]
    fn integer_steps_are_inclusive() {
        let v: Vec<_> = integer_steps(HalfInt::HALF, HalfInt::from_twice(5)).collect();
        assert_eq!(v, vec![HalfInt::from_twice(1), HalfInt::from_twice(3), HalfInt::from_twice(5)]);
        assert_eq!(integer_steps(HalfInt::ONE, HalfInt::ZERO).count(), 0);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(big.clone() * BigInt::from(3), big);
        assert_eq!(rational_to_f64(&r), 3.0);
        let q = BigRational::new(BigInt::from(-9), BigInt::from(4));
        assert_eq!(signed_sqrt_rational(&q), -1.5);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(a in -200i64..200, b in -200i64..200) {
            let x = HalfInt::from_twice(a);
            let y = HalfInt::from_twice(b);
            prop_assert_eq!((x + y).value(), x.value() + y.value());
            prop_assert_eq!((x - y).value(), x.value() - y.value());
            prop_assert_eq!(x < y, x.value() < y.value());
            prop_assert_eq!((-x).value(), -x.value());
        }
    }
}
