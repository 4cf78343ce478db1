//! Reduced fractions over big integers, with `1/0` as the only infinite value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den >= 1`, or the sentinel `1/0`.
///
/// The arithmetic operators panic when either operand is `1/0` or on
/// division by zero; use the `checked_*` methods to get an error instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds `num/den` in lowest terms. Any `n/0` with `n != 0` becomes `1/0`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return if num.is_zero() {
                Err(Error::Indeterminate)
            } else {
                Ok(Self::infinity())
            };
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Rational { num, den }
    }

    /// `num/den` for a pair already known to be coprime with `den > 0`.
    pub(crate) fn from_reduced(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive() && num.gcd(&den).is_one());
        Rational { num, den }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn infinity() -> Self {
        Rational {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    fn finite(&self) -> Result<&Self> {
        if self.is_infinite() {
            Err(Error::Infinite)
        } else {
            Ok(self)
        }
    }

    pub fn floor(&self) -> Result<BigInt> {
        let s = self.finite()?;
        Ok(s.num.div_floor(&s.den))
    }

    pub fn ceil(&self) -> Result<BigInt> {
        let s = self.finite()?;
        Ok(-((-&s.num).div_floor(&s.den)))
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = (self.finite()?, rhs.finite()?);
        if a.den == b.den {
            return Ok(Self::reduce(&a.num + &b.num, a.den.clone()));
        }
        Ok(Self::reduce(
            &a.num * &b.den + &b.num * &a.den,
            &a.den * &b.den,
        ))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = (self.finite()?, rhs.finite()?);
        Ok(Self::reduce(&a.num * &b.num, &a.den * &b.den))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = (self.finite()?, rhs.finite()?);
        if b.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&a.num * &b.den, &a.den * &b.num))
    }

    pub fn checked_neg(&self) -> Result<Self> {
        let a = self.finite()?;
        Ok(Rational {
            num: -&a.num,
            den: a.den.clone(),
        })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Decimal expansion truncated toward zero after `digits` places.
    /// Terminating expansions are printed exactly without trailing zeros.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_infinite() {
            return "inf".to_string();
        }
        let neg = self.num.is_negative();
        let num = self.num.abs();
        let (int, mut rem) = num.div_rem(&self.den);
        let ten = BigInt::from(10);
        let mut frac = String::new();
        while frac.len() < digits && !rem.is_zero() {
            rem *= &ten;
            let (d, r) = rem.div_rem(&self.den);
            frac.push_str(&d.to_string());
            rem = r;
        }
        if frac.is_empty() {
            frac.push('0');
        }
        let sign = if neg { "-" } else { "" };
        format!("{sign}{int}.{frac}")
    }

    /// True when the decimal expansion stops within `digits` places.
    pub fn terminates_within(&self, digits: usize) -> bool {
        if self.is_infinite() {
            return false;
        }
        let scaled = &self.num * BigInt::from(10).pow(digits as u32);
        (&scaled % &self.den).is_zero()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, `n`, or `inf`, with an optional sign on `p` or `n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Self::infinity());
        }
        let int = |x: &str| -> Result<BigInt> {
            let x = x.trim();
            let digits = x.strip_prefix(['+', '-']).unwrap_or(x);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            x.parse::<BigInt>().map_err(|_| bad())
        };
        match t.split_once('/') {
            None => Ok(Self::from_integer(int(t)?)),
            Some((p, q)) => {
                let q = int(q)?;
                if q.is_negative() {
                    return Err(bad());
                }
                Self::new(int(p)?, q).map_err(|_| bad())
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                match self.$checked(rhs) {
                    Ok(r) => r,
                    Err(e) => panic!("{self} {} {rhs}: {e}", stringify!($m)),
                }
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$m(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.checked_neg().expect("negating 1/0")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

/// Farey sum `(p1+p2)/(q1+q2)`, reduced. Total on the extended rationals.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    let num = &x.num + &y.num;
    let den = &x.den + &y.den;
    if den.is_zero() {
        // both infinite
        return Rational::infinity();
    }
    Rational::reduce(num, den)
}

/// `q^2 |x - p/q|` for the approximant `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ApproximationQuality {
    pub value: Rational,
}

pub fn approx_quality(x: &Rational, approximant: &Rational) -> Result<ApproximationQuality> {
    x.finite()?;
    approximant.finite()?;
    if x == approximant {
        return Err(Error::ApproximantEqualsTarget(x.clone()));
    }
    let q = Rational::from_integer(approximant.den.clone());
    let value = &(&q * &q) * &(x - approximant).abs();
    Ok(ApproximationQuality { value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// `±x + n`.
pub fn affine_apply(x: &Rational, sign: Sign, n: &BigInt) -> Result<Rational> {
    let x = x.finite()?;
    let signed = match sign {
        Sign::Plus => x.clone(),
        Sign::Minus => -x,
    };
    Ok(Rational {
        num: signed.num + n * &signed.den,
        den: signed.den,
    })
}
