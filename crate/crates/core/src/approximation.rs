//! Approximation constants `C(x)`, best approximants, and the decision
//! whether a rational is badly approximable (`C(x) >= 1/3`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::companions::{companion_of, gamma_extended, CompanionRef, Side, UCache};
use crate::error::{Error, Result};
use crate::forest::{centered_triple_of, is_centered, RationalMarkovTriple};
use crate::rational::Rational;

/// Exact `C(x)` with every fraction attaining it, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestApproximation {
    pub constant: Rational,
    pub argmins: Vec<Rational>,
}

/// Running minimum of `q |p0 q - p q0|` (the quality scaled by `q0`).
#[derive(Default)]
struct Best {
    min: Option<BigInt>,
    argmins: Vec<(BigInt, BigInt)>,
}

impl Best {
    fn offer(&mut self, score: BigInt, p: BigInt, q: BigInt) {
        match &self.min {
            Some(m) if score > *m => {}
            Some(m) if score == *m => self.argmins.push((p, q)),
            _ => {
                self.min = Some(score);
                self.argmins = vec![(p, q)];
            }
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if let Some(m) = other.min {
            for (p, q) in other.argmins {
                self.offer(m.clone(), p, q);
            }
        }
        self
    }
}

fn scan(x: &Rational, qs: impl Iterator<Item = BigInt>) -> Best {
    let (p0, q0) = (x.numer(), x.denom());
    let mut best = Best::default();
    for q in qs {
        let (fl, rem) = (p0 * &q).div_mod_floor(q0);
        let candidates = if rem.is_zero() {
            [&fl - 1, &fl + 1]
        } else {
            [fl.clone(), &fl + 1]
        };
        for p in candidates {
            if !p.gcd(&q).is_one() {
                continue;
            }
            let score = &q * (p0 * &q - &p * q0).abs();
            best.offer(score, p, q.clone());
        }
    }
    best
}

fn finish(x: &Rational, best: Best) -> BestApproximation {
    let constant = Rational::new(
        best.min.expect("q = 1 always contributes"),
        x.denom().clone(),
    )
    .unwrap();
    let mut argmins: Vec<Rational> = best
        .argmins
        .into_iter()
        .map(|(p, q)| Rational::new(p, q).unwrap())
        .collect();
    argmins.sort();
    argmins.dedup();
    BestApproximation { constant, argmins }
}

/// Minimum of `q^2 |x - p/q|` over reduced `p/q != x` with `q <= den(x)`,
/// trying only the two integers nearest to `xq` for each `q`.
pub fn c_constant_bruteforce(x: &Rational) -> Result<BestApproximation> {
    if x.is_infinite() {
        return Err(Error::Infinite);
    }
    let top = x.denom().clone();
    let qs = num_iter(BigInt::one(), top);
    Ok(finish(x, scan(x, qs)))
}

/// [`c_constant_bruteforce`] with the range of `q` split across the rayon pool.
pub fn c_constant_bruteforce_parallel(x: &Rational) -> Result<BestApproximation> {
    if x.is_infinite() {
        return Err(Error::Infinite);
    }
    const CHUNK: u64 = 4096;
    let top: u64 = match x.denom().try_into() {
        Ok(t) => t,
        Err(_) => return c_constant_bruteforce(x),
    };
    let best = (0..top.div_ceil(CHUNK))
        .into_par_iter()
        .map(|i| {
            let lo = i * CHUNK + 1;
            let hi = ((i + 1) * CHUNK).min(top);
            scan(x, (lo..=hi).map(BigInt::from))
        })
        .reduce(Best::default, Best::merge);
    Ok(finish(x, best))
}

fn num_iter(from: BigInt, to: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = from;
    std::iter::from_fn(move || {
        if cur > to {
            return None;
        }
        let out = cur.clone();
        cur += 1;
        Some(out)
    })
}

/// `q1 q3 / q2` for a centered triple.
pub fn c_markov(t: &RationalMarkovTriple) -> Result<Rational> {
    if !is_centered(t) {
        return Err(Error::NotCentered);
    }
    Ok(Rational::new(t.q1() * t.q3(), t.q2().clone()).unwrap())
}

/// `q u_{k-1} / u_k`.
pub fn c_companion(c: &CompanionRef) -> Rational {
    let q = c.base().denom();
    let k = i64::from(c.k());
    let cache = UCache::global();
    Rational::new(q * cache.get_unchecked(q, k - 1), cache.get_unchecked(q, k)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    MarkovFraction(RationalMarkovTriple),
    Companion(CompanionRef),
    /// Badly approximable neither way; carries the full oracle result, whose
    /// first argmin is the witness with quality below `1/3`.
    Neither(BestApproximation),
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::MarkovFraction(_) => "markov_fraction",
            Classification::Companion(_) => "companion",
            Classification::Neither(_) => "neither",
        }
    }

    /// Constant and best approximants given by the closed forms
    /// (or the oracle result for `Neither`).
    pub fn best_approximation(&self) -> BestApproximation {
        match self {
            Classification::MarkovFraction(t) => BestApproximation {
                constant: c_markov(t).expect("classified triples are centered"),
                argmins: vec![t.x1().clone(), t.x3().clone()],
            },
            Classification::Companion(c) => {
                let mut argmins = vec![c.base().clone()];
                if c.k() > 2 {
                    argmins.push(c.previous());
                }
                argmins.sort();
                BestApproximation {
                    constant: c_companion(c),
                    argmins,
                }
            }
            Classification::Neither(b) => b.clone(),
        }
    }

    pub fn witness(&self) -> Option<&Rational> {
        match self {
            Classification::Neither(b) => b.argmins.first(),
            _ => None,
        }
    }
}

pub fn classify(y: &Rational) -> Result<Classification> {
    if y.is_infinite() {
        return Err(Error::Infinite);
    }
    if let Some(t) = centered_triple_of(y) {
        return Ok(Classification::MarkovFraction(t));
    }
    if let Some(c) = companion_of(y) {
        return Ok(Classification::Companion(c));
    }
    Ok(Classification::Neither(c_constant_bruteforce(y)?))
}

/// `e^d = 2 q^2 |x - p/q|`, `d` the signed distance between the vertical
/// geodesic over `x` and the Ford horocycle at `p/q`.
pub fn horocycle_gap(x: &Rational, p: &BigInt, q: &BigInt) -> Result<Rational> {
    if !q.is_positive() {
        return Err(Error::DivisionByZero);
    }
    let a = Rational::new(p.clone(), q.clone())?;
    if x.is_infinite() {
        return Err(Error::Infinite);
    }
    if a == *x {
        return Err(Error::ApproximantEqualsTarget(x.clone()));
    }
    let q = Rational::from_integer(q.clone());
    Ok(&(&Rational::from(2) * &(&q * &q)) * &(x - &a).abs())
}

/// `|γ_{k+1} - γ_k| < 1/(3 q^2 u_{k+1}^2) + 1/(3 q^2 u_k^2)`, with `γ_1` the base.
pub fn gap_inequality_check(base: &Rational, side: Side, k: i64) -> Result<bool> {
    if k < 1 {
        return Err(Error::CompanionIndex(k));
    }
    let next = gamma_extended(base, side, k + 1)?;
    let cur = gamma_extended(base, side, k)?;
    let q = base.denom();
    let cache = UCache::global();
    let term = |u: BigInt| Rational::new(1, BigInt::from(3) * q * q * &u * &u).unwrap();
    let bound = &term(cache.get_unchecked(q, k + 1)) + &term(cache.get_unchecked(q, k));
    Ok((&next - &cur).abs() < bound)
}
