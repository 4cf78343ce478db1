//! Real quadratic surds `(a + b*sqrt(d))/c` with exact comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Trial division stops here; radicands whose square part hides behind two
/// larger primes keep that factor (the value and all comparisons stay exact).
const TRIAL_DIVISION_LIMIT: u32 = 1 << 21;

/// `(a + b*sqrt(d))/c` with `c > 0`, `gcd(a, b, c) = 1` and `d` square-free.
/// Rationals are stored with `b = 0` and `d = 0`.
///
/// Equality and ordering compare real values.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Sign of `a + b*sqrt(d)` for `d >= 0`.
pub(crate) fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = if d.is_zero() {
        Ordering::Equal
    } else {
        b.sign_cmp()
    };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: the larger magnitude wins
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes `d = s^2 * f`, returning `(s, f)`.
pub(crate) fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    if d.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    if let Some(s) = perfect_sqrt(d) {
        return (s, BigInt::one());
    }
    let mut rest = d.clone();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p: u32 = 2;
    let mut cube_bound = rest.cbrt();
    while p <= TRIAL_DIVISION_LIMIT && BigInt::from(p) <= cube_bound {
        if (&rest % p).is_zero() {
            let mut e = 0u32;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            s *= BigInt::from(p).pow(e / 2);
            if e % 2 == 1 {
                f *= p;
            }
            cube_bound = rest.cbrt();
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // what is left is 1, a prime, a product of two primes, or a square
    match perfect_sqrt(&rest) {
        Some(r) => s *= r,
        None => f *= rest,
    }
    (s, f)
}

impl QuadraticSurd {
    /// Builds `(a + b*sqrt(d))/c` in canonical form.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (mut a, mut b, mut c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::NegativeRadicand(d));
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let (s, mut d) = split_square(&d);
        b *= s;
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() {
            d = BigInt::zero();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadraticSurd { a, b, c, d })
    }

    pub fn from_rational(r: &Rational) -> Result<Self> {
        if r.is_infinite() {
            return Err(Error::Infinite);
        }
        Ok(QuadraticSurd {
            a: r.numer().clone(),
            b: BigInt::zero(),
            c: r.denom().clone(),
            d: BigInt::zero(),
        })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.a.clone(), self.c.clone()).unwrap())
    }

    /// Exact ordering of this value against a finite rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        assert!(!r.is_infinite(), "comparison against 1/0");
        // (a + b√d)·q − p·c
        let a = &self.a * r.denom() - r.numer() * &self.c;
        let b = &self.b * r.denom();
        sign_of(&a, &b, &self.d)
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::RadicandMismatch(self.d.clone(), other.d.clone())),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Self::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Self::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        )
    }

    pub fn recip(&self) -> Result<Self> {
        // c/(a + b√d) = c(a − b√d)/(a² − b²d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        )
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    /// Enclosure `lo <= value <= hi` with `hi - lo <= 2^-bits`.
    pub fn bracket(&self, bits: u32) -> (Rational, Rational) {
        if let Some(r) = self.to_rational() {
            return (r.clone(), r);
        }
        let (floor, exact) = floor_scaled(&self.a, &self.b, &self.c, &self.d, bits);
        let scale = BigInt::one() << bits;
        let hi = if exact { floor.clone() } else { &floor + 1 };
        (
            Rational::new(floor, scale.clone()).unwrap(),
            Rational::new(hi, scale).unwrap(),
        )
    }

    /// Decimal preview: the midpoint of a 64-bit enclosure, truncated.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (lo, hi) = self.bracket(64);
        let mid = &(&lo + &hi) / &Rational::from(2);
        mid.to_decimal(digits)
    }
}

/// `floor((a + b√d)·2^bits / c)` for `c > 0`, and whether the floor is exact.
pub(crate) fn floor_scaled(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
    bits: u32,
) -> (BigInt, bool) {
    let big_a = a << bits;
    let big_b = b << bits;
    let square = &big_b * &big_b * d;
    let root = square.sqrt();
    let root_exact = &root * &root == square;
    // t = floor(B√d)
    let t = if !big_b.is_negative() {
        root
    } else if root_exact {
        -root
    } else {
        -root - 1
    };
    let num = big_a + t;
    let (q, r) = num.div_mod_floor(c);
    (q, root_exact && r.is_zero())
}

/// Exact ordering of `s` against `r`.
pub fn surd_cmp(s: &QuadraticSurd, r: &Rational) -> Ordering {
    s.cmp_rational(r)
}

/// Dyadic enclosure of `s` with width at most `2^-bits`; exact for rationals.
pub fn surd_bracket(s: &QuadraticSurd, bits: u32) -> (Rational, Rational) {
    s.bracket(bits)
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        // sign of (a1 c2 − a2 c1) + b1 c2 √d1 − b2 c1 √d2
        let x = &self.a * &other.c - &other.a * &self.c;
        let y = &self.b * &other.c;
        let z = -(&other.b * &self.c);
        if self.d == other.d || other.is_rational() {
            return sign_of(&x, &(y + z), &self.d);
        }
        if self.is_rational() {
            return sign_of(&x, &z, &other.d);
        }
        let su = sign_of(&x, &y, &self.d);
        let sv = z.sign_cmp();
        if sv == Ordering::Equal || su == sv {
            return su;
        }
        if su == Ordering::Equal {
            return sv;
        }
        // |u|² − |v|² = x² + y²d1 − z²d2 + 2xy√d1
        let rat = &x * &x + &y * &y * &self.d - &z * &z * &other.d;
        let irr = BigInt::from(2) * &x * &y;
        match sign_of(&rat, &irr, &self.d) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadraticSurd {}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt({}))/{}",
            self.a,
            op,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    /// Parses the `(a+b*sqrt(d))/c` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseSurd(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_prefix('(').ok_or_else(bad)?;
        let (inner, c) = body.split_once(")/").ok_or_else(bad)?;
        let (head, tail) = inner.split_once("*sqrt(").ok_or_else(bad)?;
        let d = tail.strip_suffix(')').ok_or_else(bad)?;
        let cut = head
            .char_indices()
            .skip(1)
            .filter(|&(_, ch)| ch == '+' || ch == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let (a, b) = head.split_at(cut);
        let int = |x: &str| x.parse::<BigInt>().map_err(|_| bad());
        Self::new(int(a)?, int(b)?, int(c)?, int(d)?)
    }
}

impl Serialize for QuadraticSurd {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadraticSurd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
