//! Identity checks tying the pieces together: Markov's equation in its
//! fractional form, quadratic residues, McShane sums, geodesic lengths.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::companions::interval;
use crate::error::{Error, Result};
use crate::forest::{
    enumerate_forest, is_centered, is_markov_number, ForestLimit, RationalMarkovTriple,
};
use crate::rational::Rational;
use crate::surd::{floor_scaled, QuadraticSurd};

/// `q1/(q2 q3) + q2/(q3 q1) + q3/(q1 q2) = 3`, evaluated in rationals.
pub fn check_markov_q(q1: &BigInt, q2: &BigInt, q3: &BigInt) -> bool {
    if !(q1.is_positive() && q2.is_positive() && q3.is_positive()) {
        return false;
    }
    let f = |a: &BigInt, b: &BigInt, c: &BigInt| Rational::new(a.clone(), b * c).unwrap();
    let sum = &(&f(q1, q2, q3) + &f(q2, q3, q1)) + &f(q3, q1, q2);
    sum == Rational::from(3)
}

/// The middle numerator `p2`, after checking `q2 | p2^2 + 1`.
pub fn quadratic_residue_witness(t: &RationalMarkovTriple) -> Result<BigInt> {
    let (p2, q2) = (t.x2().numer(), t.q2());
    let n: BigInt = p2 * p2 + 1;
    if !(&n % q2).is_zero() {
        return Err(Error::NotDivisible(q2.clone(), n));
    }
    Ok(p2.clone())
}

/// Enclosure of the summed interval lengths over Markov fractions in `[0, 3)`
/// down to a given forest depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McShaneSummary {
    pub depth: usize,
    pub bits: u32,
    pub terms: usize,
    pub lo: Rational,
    pub hi: Rational,
}

impl McShaneSummary {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Denominators of the Markov fractions in `[0, 1)` reached within `depth`:
/// the integer `0` and every middle of the tree over `[0, 1]`.
pub fn window_denominators(depth: usize) -> Vec<BigInt> {
    std::iter::once(BigInt::one())
        .chain(
            enumerate_forest(0, ForestLimit::MaxDepth(depth)).map(|node| node.triple.q2().clone()),
        )
        .collect()
}

/// Sums `|I_x| = 2 δ_q` over the Markov fractions of `[0, 3)` down to
/// `depth` (three translates of each class in `[0, 1)`), every term rounded
/// outward to a multiple of `2^-bits`.
pub fn mcshane_partial_sum(depth: usize, bits: u32) -> Result<McShaneSummary> {
    const MIN_BITS: u32 = 16;
    if bits < MIN_BITS {
        return Err(Error::Precision(bits, MIN_BITS));
    }
    let qs = window_denominators(depth);
    let (lo, hi) = qs
        .par_iter()
        .map(|q| {
            // 2 δ_q = (3q − sqrt(9q² − 4)) / q
            let disc = BigInt::from(9) * q * q - 4;
            let (f, exact) =
                floor_scaled(&(BigInt::from(3) * q), &BigInt::from(-1), q, &disc, bits);
            let up = if exact { f.clone() } else { &f + 1 };
            (f, up)
        })
        .reduce(
            || (BigInt::zero(), BigInt::zero()),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    let scale = BigInt::one() << bits;
    let three = BigInt::from(3);
    Ok(McShaneSummary {
        depth,
        bits,
        terms: 3 * qs.len(),
        lo: Rational::new(lo * &three, scale.clone())?,
        hi: Rational::new(hi * three, scale)?,
    })
}

/// Exact widths `2 δ_q` of the terms in [`mcshane_partial_sum`].
pub fn mcshane_exact_terms(depth: usize) -> Result<Vec<QuadraticSurd>> {
    let qs = window_denominators(depth);
    let mut out = Vec::new();
    for _translate in 0..3 {
        for q in qs.iter().cloned() {
            let disc = BigInt::from(9) * &q * &q - 4;
            out.push(QuadraticSurd::new(BigInt::from(3) * &q, -1, q, disc)?);
        }
    }
    Ok(out)
}

/// `e^{L/2} = (3q + sqrt(9q^2 - 4))/2` for the closed geodesic of a Markov number `q`.
pub fn geodesic_length(q: &BigInt) -> Result<QuadraticSurd> {
    if !is_markov_number(q) {
        return Err(Error::NotMarkovNumber(q.clone()));
    }
    QuadraticSurd::new(BigInt::from(3) * q, 1, 2, BigInt::from(9) * q * q - 4)
}

/// `1/(1 + e^L) = |I_x|/6` in exact surd arithmetic.
pub fn mcshane_term(q: &BigInt) -> Result<bool> {
    let half = geodesic_length(q)?;
    let one = QuadraticSurd::from_rational(&Rational::one())?;
    let lhs = half.try_mul(&half)?.try_add(&one)?.recip()?;
    let x = Rational::new(BigInt::one(), q.clone())?;
    let x = if q.is_one() { Rational::zero() } else { x };
    let width = match interval(&x) {
        Ok(i) => i.width(),
        // every Markov number has a fraction, but 1/q need not be it
        Err(_) => {
            let disc = BigInt::from(9) * q * q - 4;
            QuadraticSurd::new(BigInt::from(3) * q, -1, q.clone(), disc)?
        }
    };
    let rhs = width.try_div(&QuadraticSurd::from_rational(&Rational::from(6))?)?;
    Ok(lhs == rhs)
}

/// `q2/(q3 q1) >= 3/(1 + 1/q1^2 + 1/q3^2)` for a centered triple.
pub fn squeeze_estimate(t: &RationalMarkovTriple) -> Result<bool> {
    if !is_centered(t) {
        return Err(Error::NotCentered);
    }
    let (q1, q2, q3) = (t.q1(), t.q2(), t.q3());
    let lhs = Rational::new(q2.clone(), q3 * q1)?;
    let inv_sq = |q: &BigInt| Rational::new(BigInt::one(), q * q).unwrap();
    let rhs = &Rational::from(3) / &(&(&Rational::one() + &inv_sq(q1)) + &inv_sq(q3));
    Ok(lhs >= rhs)
}

/// Pairs of Markov fractions whose open intervals meet.
pub fn overlapping_intervals(xs: &[Rational]) -> Result<Vec<(Rational, Rational)>> {
    let ivs = xs.iter().map(interval).collect::<Result<Vec<_>>>()?;
    let mut bad = Vec::new();
    for (i, a) in ivs.iter().enumerate() {
        for b in &ivs[i + 1..] {
            if a.hi > b.lo && b.hi > a.lo {
                bad.push((a.base.clone(), b.base.clone()));
            }
        }
    }
    Ok(bad)
}
