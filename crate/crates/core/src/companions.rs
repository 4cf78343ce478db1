//! Companions of Markov fractions, the translation matrix, and the surd
//! intervals `I_x` that contain them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{centered_triple_of, children, is_markov_number, RationalMarkovTriple};
use crate::rational::Rational;
use crate::surd::{sign_of, QuadraticSurd};

/// `u_0 = 0`, `u_1 = 1`, `u_{k+1} = 3q u_k - u_{k-1}` for a Markov number `q`.
#[derive(Clone, Debug)]
pub struct USequence {
    q: BigInt,
    three_q: BigInt,
    u: Vec<BigInt>,
}

impl USequence {
    pub fn new(q: &BigInt) -> Result<Self> {
        if !is_markov_number(q) {
            return Err(Error::NotMarkovNumber(q.clone()));
        }
        Ok(Self::unchecked(q))
    }

    pub(crate) fn unchecked(q: &BigInt) -> Self {
        USequence {
            q: q.clone(),
            three_q: BigInt::from(3) * q,
            u: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `u_k` for `k >= 0`, extending the cache as needed.
    pub fn get(&mut self, k: usize) -> &BigInt {
        while self.u.len() <= k {
            let n = self.u.len();
            let next = &self.three_q * &self.u[n - 1] - &self.u[n - 2];
            self.u.push(next);
        }
        &self.u[k]
    }

    /// `u_k` for any integer `k`, using `u_{-k} = -u_k`.
    pub fn signed(&mut self, k: i64) -> BigInt {
        let v = self.get(k.unsigned_abs() as usize).clone();
        if k < 0 {
            -v
        } else {
            v
        }
    }

    pub fn cached(&self) -> &[BigInt] {
        &self.u
    }
}

/// Shared memo of u-sequences keyed by `q`. Reads run concurrently; growth
/// takes the write lock.
#[derive(Debug, Default)]
pub struct UCache {
    inner: RwLock<HashMap<BigInt, USequence>>,
}

impl UCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by [`gamma`] and friends.
    pub fn global() -> &'static UCache {
        static CACHE: OnceLock<UCache> = OnceLock::new();
        CACHE.get_or_init(UCache::new)
    }

    pub fn get(&self, q: &BigInt, k: i64) -> Result<BigInt> {
        if !self.inner.read().unwrap().contains_key(q) && !is_markov_number(q) {
            return Err(Error::NotMarkovNumber(q.clone()));
        }
        Ok(self.get_unchecked(q, k))
    }

    pub(crate) fn get_unchecked(&self, q: &BigInt, k: i64) -> BigInt {
        let idx = k.unsigned_abs() as usize;
        let hit = self
            .inner
            .read()
            .unwrap()
            .get(q)
            .and_then(|s| s.cached().get(idx).cloned());
        let v = match hit {
            Some(v) => v,
            None => {
                let mut map = self.inner.write().unwrap();
                map.entry(q.clone())
                    .or_insert_with(|| USequence::unchecked(q))
                    .get(idx)
                    .clone()
            }
        };
        if k < 0 {
            -v
        } else {
            v
        }
    }
}

pub fn u_seq(q: &BigInt, k: i64) -> Result<BigInt> {
    UCache::global().get(q, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "left" => Ok(Side::Left),
            "R" | "r" | "right" => Ok(Side::Right),
            _ => Err(Error::ParseRational(s.to_string())),
        }
    }
}

fn markov_base(base: &Rational) -> Result<RationalMarkovTriple> {
    centered_triple_of(base).ok_or_else(|| Error::NotMarkovFraction(base.clone()))
}

/// `(p u_k ± u_{k-1}) / (q u_k)`; `base` must already be known to be a Markov fraction.
fn gamma_raw(base: &Rational, side: Side, k: i64) -> Rational {
    let q = base.denom();
    let uk = UCache::global().get_unchecked(q, k);
    let uk1 = UCache::global().get_unchecked(q, k - 1);
    let num = match side {
        Side::Right => base.numer() * &uk + uk1,
        Side::Left => base.numer() * &uk - uk1,
    };
    Rational::new(num, q * uk).expect("numerator and denominator never both vanish")
}

/// The `k`-th companion of the Markov fraction `base` on the given side.
pub fn gamma(base: &Rational, side: Side, k: i64) -> Result<Rational> {
    if k < 2 {
        return Err(Error::CompanionIndex(k));
    }
    markov_base(base)?;
    Ok(gamma_raw(base, side, k))
}

/// The same formula for every integer `k`: `k = 1` gives `base`, `k = 0` gives `1/0`.
pub fn gamma_extended(base: &Rational, side: Side, k: i64) -> Result<Rational> {
    markov_base(base)?;
    Ok(gamma_raw(base, side, k))
}

/// A companion `γ±_k(base)`, `k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompanionRef {
    base: Rational,
    side: Side,
    k: u32,
}

impl CompanionRef {
    pub fn new(base: Rational, side: Side, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::CompanionIndex(k.into()));
        }
        markov_base(&base)?;
        Ok(CompanionRef { base, side, k })
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn value(&self) -> Rational {
        gamma_raw(&self.base, self.side, self.k.into())
    }

    /// The previous member of the sequence, `γ_{k-1}` (the base itself for `k = 2`).
    pub fn previous(&self) -> Rational {
        gamma_raw(&self.base, self.side, i64::from(self.k) - 1)
    }

    /// Self-intersections of the corresponding closed geodesic.
    pub fn self_intersections(&self) -> u32 {
        self.k - 1
    }
}

impl fmt::Display for CompanionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gamma{}_{}({})",
            if self.side == Side::Right { '+' } else { '-' },
            self.k,
            self.base
        )
    }
}

/// The closed interval `[x - δ_q, x + δ_q]`, `δ_q = 3/2 - sqrt(9/4 - 1/q^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdInterval {
    pub base: Rational,
    pub lo: QuadraticSurd,
    pub hi: QuadraticSurd,
}

impl SurdInterval {
    pub fn contains(&self, y: &Rational) -> bool {
        in_interval(&self.base, y)
    }

    /// `hi - lo = 2 δ_q`.
    pub fn width(&self) -> QuadraticSurd {
        self.hi
            .try_sub(&self.lo)
            .expect("endpoints share a radicand")
    }
}

pub fn interval(base: &Rational) -> Result<SurdInterval> {
    markov_base(base)?;
    let (p, q) = (base.numer(), base.denom());
    let disc: BigInt = BigInt::from(9) * q * q - 4;
    let two_p = BigInt::from(2) * p;
    let three_q = BigInt::from(3) * q;
    let two_q = BigInt::from(2) * q;
    Ok(SurdInterval {
        base: base.clone(),
        lo: QuadraticSurd::new(&two_p - &three_q, 1, two_q.clone(), disc.clone())?,
        hi: QuadraticSurd::new(&two_p + &three_q, -1, two_q, disc)?,
    })
}

/// `|y - x| <= δ_q` without building canonical surds.
pub(crate) fn in_interval(x: &Rational, y: &Rational) -> bool {
    let q = x.denom();
    let t = (y - x).abs();
    let (u, v) = (t.numer(), t.denom());
    // v·sqrt(9q² − 4) <= 3qv − 2qu
    let rhs = BigInt::from(3) * q * v - BigInt::from(2) * q * u;
    let disc: BigInt = BigInt::from(9) * q * q - 4;
    sign_of(&rhs, &(-v), &disc) != std::cmp::Ordering::Less
}

/// `[[-p, 3p + (p^2 + 1)/q], [-q, 3q + p]]`, acting by Möbius transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationMatrix {
    pub entries: [[BigInt; 2]; 2],
}

impl TranslationMatrix {
    pub fn det(&self) -> BigInt {
        let [[a, b], [c, d]] = &self.entries;
        a * d - b * c
    }

    pub fn trace(&self) -> BigInt {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        let [[a, b], [c, d]] = &self.entries;
        let (p, q) = (x.numer(), x.denom());
        Rational::new(a * p + b * q, c * p + d * q).expect("determinant one")
    }

    /// `T^k` applied to `1/0`.
    pub fn orbit_of_infinity(&self, k: usize) -> Rational {
        (0..k).fold(Rational::infinity(), |x, _| self.apply(&x))
    }

    /// `(repelling, attracting)` fixed points.
    pub fn fixed_points(&self) -> (QuadraticSurd, QuadraticSurd) {
        let [[a, b], [c, d]] = &self.entries;
        // c z² + (d − a) z − b = 0
        let disc = (d - a) * (d - a) + BigInt::from(4) * b * c;
        let make =
            |sign: i64| QuadraticSurd::new(a - d, sign, BigInt::from(2) * c, disc.clone()).unwrap();
        // with c < 0 the "+" root is the smaller one
        (make(-1), make(1))
    }
}

pub fn t_matrix(base: &Rational) -> Result<TranslationMatrix> {
    markov_base(base)?;
    let (p, q) = (base.numer(), base.denom());
    let three = BigInt::from(3);
    Ok(TranslationMatrix {
        entries: [[-p, &three * p + (p * p + 1) / q], [-q, &three * q + p]],
    })
}

/// The Markov fraction `x` with `y` in `I_x`.
pub fn locate_interval(y: &Rational) -> Result<Rational> {
    let n = y.floor()?;
    let mut t = RationalMarkovTriple::root(&n);
    loop {
        if let Some(x) = t.as_array().iter().find(|x| in_interval(x, y)) {
            return Ok(x.clone());
        }
        let (l, r) = children(&t);
        t = if y < t.x2() { l } else { r };
    }
}

/// Recognizes `y` as a companion of the Markov fraction whose interval holds it.
pub fn companion_of(y: &Rational) -> Option<CompanionRef> {
    let x = locate_interval(y).ok()?;
    if x == *y {
        return None;
    }
    let side = if y > &x { Side::Right } else { Side::Left };
    let q = x.denom();
    if !(y.denom() % q).is_zero() {
        return None;
    }
    let cache = UCache::global();
    let mut k = 2i64;
    loop {
        let den = q * cache.get_unchecked(q, k);
        if den > *y.denom() {
            return None;
        }
        if den == *y.denom() && gamma_raw(&x, side, k) == *y {
            return Some(CompanionRef {
                base: x,
                side,
                k: k as u32,
            });
        }
        k += 1;
    }
}

/// Whether `p u_k ± u_{k-1}` and `q u_k` are coprime, i.e. the companion
/// formula needs no reduction.
pub fn companion_is_reduced(base: &Rational, side: Side, k: i64) -> Result<bool> {
    markov_base(base)?;
    let q = base.denom();
    let uk = UCache::global().get_unchecked(q, k);
    let uk1 = UCache::global().get_unchecked(q, k - 1);
    let num = match side {
        Side::Right => base.numer() * &uk + uk1,
        Side::Left => base.numer() * &uk - uk1,
    };
    let den = q * uk;
    Ok(num_integer::Integer::gcd(&num, &den).is_one() && den.is_positive())
}
