//! Markov triples, rational Markov triples and the forest of centered triples.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{mediant, Rational};

pub fn is_markov_triple(q1: &BigInt, q2: &BigInt, q3: &BigInt) -> bool {
    q1.is_positive()
        && q2.is_positive()
        && q3.is_positive()
        && q1 * q1 + q2 * q2 + q3 * q3 == BigInt::from(3) * q1 * q2 * q3
}

/// Positive solution of `q1^2 + q2^2 + q3^2 = 3 q1 q2 q3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkovTriple {
    q: [BigInt; 3],
}

impl MarkovTriple {
    pub fn new(
        q1: impl Into<BigInt>,
        q2: impl Into<BigInt>,
        q3: impl Into<BigInt>,
    ) -> Result<Self> {
        let (q1, q2, q3) = (q1.into(), q2.into(), q3.into());
        if !is_markov_triple(&q1, &q2, &q3) {
            return Err(Error::NotMarkovTriple(q1, q2, q3));
        }
        debug_assert!(q1.gcd(&q2).is_one() && q2.gcd(&q3).is_one() && q1.gcd(&q3).is_one());
        Ok(MarkovTriple { q: [q1, q2, q3] })
    }

    pub fn q1(&self) -> &BigInt {
        &self.q[0]
    }

    pub fn q2(&self) -> &BigInt {
        &self.q[1]
    }

    pub fn q3(&self) -> &BigInt {
        &self.q[2]
    }

    pub fn as_array(&self) -> &[BigInt; 3] {
        &self.q
    }
}

/// Replaces `q_i` by `3 q_j q_k - q_i`.
pub fn vieta_neighbor(t: &MarkovTriple, i: usize) -> Result<MarkovTriple> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidPosition(i));
    }
    let mut q = t.q.clone();
    let (j, k) = ((i) % 3, (i + 1) % 3);
    q[i - 1] = BigInt::from(3) * &t.q[j] * &t.q[k] - &t.q[i - 1];
    let [a, b, c] = q;
    MarkovTriple::new(a, b, c)
}

/// Three fractions whose denominators form a Markov triple and whose
/// neighbouring determinants are `p2 q1 - p1 q2 = q3`, `p3 q2 - p2 q3 = q1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMarkovTriple {
    x: [Rational; 3],
}

fn det(x: &Rational, y: &Rational) -> BigInt {
    y.numer() * x.denom() - x.numer() * y.denom()
}

impl RationalMarkovTriple {
    pub fn new(x1: Rational, x2: Rational, x3: Rational) -> Result<Self> {
        if x1.is_infinite() || x2.is_infinite() || x3.is_infinite() {
            return Err(Error::Infinite);
        }
        MarkovTriple::new(x1.denom().clone(), x2.denom().clone(), x3.denom().clone())?;
        if det(&x1, &x2) != *x3.denom() {
            return Err(Error::RelationFailed("p2*q1 - p1*q2 = q3"));
        }
        if det(&x2, &x3) != *x1.denom() {
            return Err(Error::RelationFailed("p3*q2 - p2*q3 = q1"));
        }
        Ok(RationalMarkovTriple { x: [x1, x2, x3] })
    }

    fn unchecked(x1: Rational, x2: Rational, x3: Rational) -> Self {
        debug_assert!(Self::new(x1.clone(), x2.clone(), x3.clone()).is_ok());
        RationalMarkovTriple { x: [x1, x2, x3] }
    }

    /// The root `(n, n + 1/2, n + 1)` of the tree over `[n, n + 1]`.
    pub fn root(n: &BigInt) -> Self {
        let two = BigInt::from(2);
        Self::unchecked(
            Rational::from_integer(n.clone()),
            Rational::new(n * &two + 1, two).unwrap(),
            Rational::from_integer(n + 1),
        )
    }

    /// The integral triple `(n - 1, n, n + 1)`.
    pub fn integral(n: &BigInt) -> Self {
        Self::unchecked(
            Rational::from_integer(n - 1),
            Rational::from_integer(n.clone()),
            Rational::from_integer(n + 1),
        )
    }

    pub fn x1(&self) -> &Rational {
        &self.x[0]
    }

    pub fn x2(&self) -> &Rational {
        &self.x[1]
    }

    pub fn x3(&self) -> &Rational {
        &self.x[2]
    }

    pub fn as_array(&self) -> &[Rational; 3] {
        &self.x
    }

    pub fn q1(&self) -> &BigInt {
        self.x[0].denom()
    }

    pub fn q2(&self) -> &BigInt {
        self.x[1].denom()
    }

    pub fn q3(&self) -> &BigInt {
        self.x[2].denom()
    }

    pub fn denominators(&self) -> MarkovTriple {
        MarkovTriple {
            q: [self.q1().clone(), self.q2().clone(), self.q3().clone()],
        }
    }

    /// `(x3 - 3, x1, x2)` and `(x2, x3, x1 + 3)`.
    pub fn shifts(&self) -> (Self, Self) {
        let three = Rational::from(3);
        (
            Self::unchecked(&self.x[2] - &three, self.x[0].clone(), self.x[1].clone()),
            Self::unchecked(self.x[1].clone(), self.x[2].clone(), &self.x[0] + &three),
        )
    }
}

impl fmt::Display for RationalMarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x[0], self.x[1], self.x[2])
    }
}

/// Which two members of a rational Markov triple are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    From12,
    From23,
    From13,
}

fn exact_div(n: &BigInt, d: &BigInt) -> Result<BigInt> {
    let (q, r) = n.div_rem(d);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NotDivisible(d.clone(), n.clone()))
    }
}

fn check_den(x: &Rational, q: &BigInt) -> Result<()> {
    if x.is_infinite() {
        return Err(Error::Infinite);
    }
    if x.denom() != q {
        return Err(Error::DenominatorMismatch(x.clone(), q.clone()));
    }
    Ok(())
}

/// Recovers the missing member of a rational Markov triple from two others.
pub fn complete_triple(
    mode: Completion,
    first: &Rational,
    second: &Rational,
    dens: &MarkovTriple,
) -> Result<RationalMarkovTriple> {
    let [q1, q2, q3] = &dens.q;
    let frac = |p: BigInt, q: &BigInt| Rational::new(p, q.clone()).unwrap();
    match mode {
        Completion::From12 => {
            let (x1, x2) = (first, second);
            check_den(x1, q1)?;
            check_den(x2, q2)?;
            if det(x1, x2) != *q3 {
                return Err(Error::RelationFailed("p2*q1 - p1*q2 = q3"));
            }
            let p2 = x2.numer();
            let p3 = q1 * exact_div(&(p2 * p2 + 1), q2)? - x1.numer() * p2;
            RationalMarkovTriple::new(x1.clone(), x2.clone(), frac(p3, q3))
        }
        Completion::From23 => {
            let (x2, x3) = (first, second);
            check_den(x2, q2)?;
            check_den(x3, q3)?;
            if det(x2, x3) != *q1 {
                return Err(Error::RelationFailed("p3*q2 - p2*q3 = q1"));
            }
            let p2 = x2.numer();
            let p1 = p2 * x3.numer() - q3 * exact_div(&(p2 * p2 + 1), q2)?;
            RationalMarkovTriple::new(frac(p1, q1), x2.clone(), x3.clone())
        }
        Completion::From13 => {
            let (x1, x3) = (first, second);
            check_den(x1, q1)?;
            check_den(x3, q3)?;
            let q2_alt = exact_div(&(q1 * q1 + q3 * q3), q2)?;
            if det(x1, x3) != q2_alt {
                return Err(Error::RelationFailed("p3*q1 - p1*q3 = (q1^2 + q3^2)/q2"));
            }
            let p2 = exact_div(&(x1.numer() * q1 + x3.numer() * q3), &q2_alt)?;
            RationalMarkovTriple::new(x1.clone(), frac(p2, q2), x3.clone())
        }
    }
}

/// Left child `(x1, ., x2)` and right child `(x2, ., x3)`.
pub fn children(t: &RationalMarkovTriple) -> (RationalMarkovTriple, RationalMarkovTriple) {
    let [x1, x2, x3] = &t.x;
    let (p1, p2, p3) = (x1.numer(), x2.numer(), x3.numer());
    let (q1, q2, q3) = (x1.denom(), x2.denom(), x3.denom());
    let q3n = (q1 * q1 + q2 * q2) / q3;
    let p3n = (p1 * q1 + p2 * q2) / q3;
    let q1n = (q2 * q2 + q3 * q3) / q1;
    let p1n = (p2 * q2 + p3 * q3) / q1;
    (
        RationalMarkovTriple::unchecked(x1.clone(), Rational::from_reduced(p3n, q3n), x2.clone()),
        RationalMarkovTriple::unchecked(x2.clone(), Rational::from_reduced(p1n, q1n), x3.clone()),
    )
}

/// The two triples having `t` as a child: `(y, x1, x3)` and `(x1, x3, y + 3)`.
pub fn parents(t: &RationalMarkovTriple) -> (RationalMarkovTriple, RationalMarkovTriple) {
    let [x1, x2, x3] = &t.x;
    let (p1, q1) = (x1.numer(), x1.denom());
    let (p3, q3) = (x3.numer(), x3.denom());
    let q2n = (q1 * q1 + q3 * q3) / x2.denom();
    let p2n = p3 * p1 - (p1 * p1 + 1) / q1 * q3;
    let y = Rational::from_reduced(p2n, q2n);
    let y3 = &y + &Rational::from(3);
    (
        RationalMarkovTriple::unchecked(y, x1.clone(), x3.clone()),
        RationalMarkovTriple::unchecked(x1.clone(), x3.clone(), y3),
    )
}

pub fn is_centered(t: &RationalMarkovTriple) -> bool {
    t.q2() >= t.q1() && t.q2() >= t.q3()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Turn {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// Address of a forest node: the unit interval `[n, n + 1]` and the turns
/// taken from its root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SternBrocotPath {
    pub base: BigInt,
    pub turns: Vec<Turn>,
}

impl SternBrocotPath {
    pub fn root(base: impl Into<BigInt>) -> Self {
        SternBrocotPath {
            base: base.into(),
            turns: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.turns.len()
    }

    pub fn child(&self, turn: Turn) -> Self {
        let mut turns = self.turns.clone();
        turns.push(turn);
        SternBrocotPath {
            base: self.base.clone(),
            turns,
        }
    }

    pub fn turns_string(&self) -> String {
        self.turns
            .iter()
            .map(|t| if *t == Turn::Left { 'L' } else { 'R' })
            .collect()
    }

    /// The centered triple at this address.
    pub fn triple(&self) -> RationalMarkovTriple {
        let mut t = RationalMarkovTriple::root(&self.base);
        for turn in &self.turns {
            let (l, r) = children(&t);
            t = if *turn == Turn::Left { l } else { r };
        }
        t
    }
}

impl fmt::Display for SternBrocotPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base, self.turns_string())
    }
}

impl FromStr for SternBrocotPath {
    type Err = Error;

    /// Parses `n:LRL...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let (base, turns) = s.split_once(':').ok_or_else(bad)?;
        let base = base.trim().parse::<BigInt>().map_err(|_| bad())?;
        let turns = turns
            .trim()
            .chars()
            .map(|c| match c {
                'L' => Ok(Turn::Left),
                'R' => Ok(Turn::Right),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        Ok(SternBrocotPath { base, turns })
    }
}

/// Descends from the root over `[floor x, floor x + 1]` toward a
/// non-integral `x`; returns the turns when `x` is a middle element.
fn descend(x: &Rational) -> Option<(SternBrocotPath, RationalMarkovTriple)> {
    let n = x.floor().ok()?;
    let mut path = SternBrocotPath::root(n.clone());
    let mut t = RationalMarkovTriple::root(&n);
    loop {
        if t.x2() == x {
            return Some((path, t));
        }
        if t.q2() >= x.denom() {
            return None;
        }
        let (l, r) = children(&t);
        if x < t.x2() {
            path.turns.push(Turn::Left);
            t = l;
        } else {
            path.turns.push(Turn::Right);
            t = r;
        }
    }
}

/// The centered triple whose middle element is `x`, if `x` is a Markov fraction.
pub fn centered_triple_of(x: &Rational) -> Option<RationalMarkovTriple> {
    if x.is_infinite() {
        return None;
    }
    if x.is_integer() {
        return Some(RationalMarkovTriple::integral(x.numer()));
    }
    descend(x).map(|(_, t)| t)
}

pub fn is_markov_fraction(x: &Rational) -> bool {
    if x.is_infinite() {
        return false;
    }
    // integers and half-integers sit in the root triples
    if x.is_integer() || *x.denom() == BigInt::from(2) {
        return true;
    }
    descend(x).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForestLimit {
    MaxDepth(usize),
    MaxDenominator(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestNode {
    pub path: SternBrocotPath,
    pub triple: RationalMarkovTriple,
}

/// Breadth-first walk of the centered triples over `[n, n + 1]`.
pub struct ForestIter {
    queue: VecDeque<ForestNode>,
    limit: ForestLimit,
}

impl ForestIter {
    fn admits(&self, node: &ForestNode) -> bool {
        match &self.limit {
            ForestLimit::MaxDepth(d) => node.path.depth() <= *d,
            ForestLimit::MaxDenominator(q) => node.triple.q2() <= q,
        }
    }
}

impl Iterator for ForestIter {
    type Item = ForestNode;

    fn next(&mut self) -> Option<ForestNode> {
        let node = self.queue.pop_front()?;
        let (l, r) = children(&node.triple);
        for (turn, triple) in [(Turn::Left, l), (Turn::Right, r)] {
            let child = ForestNode {
                path: node.path.child(turn),
                triple,
            };
            if self.admits(&child) {
                self.queue.push_back(child);
            }
        }
        Some(node)
    }
}

/// Centered triples over `[n, n + 1]`, breadth first, left before right.
pub fn enumerate_forest(n: impl Into<BigInt>, limit: ForestLimit) -> ForestIter {
    let path = SternBrocotPath::root(n);
    let root = ForestNode {
        triple: path.triple(),
        path,
    };
    let mut it = ForestIter {
        queue: VecDeque::new(),
        limit,
    };
    if it.admits(&root) {
        it.queue.push_back(root);
    }
    it
}

/// Same output as [`enumerate_forest`], with subtrees expanded on the rayon
/// pool and merged back into breadth-first order.
pub fn enumerate_forest_parallel(n: impl Into<BigInt>, limit: ForestLimit) -> Vec<ForestNode> {
    const SPLIT_DEPTH: usize = 4;
    let n = n.into();
    let split = match &limit {
        ForestLimit::MaxDepth(d) => SPLIT_DEPTH.min(*d),
        ForestLimit::MaxDenominator(_) => SPLIT_DEPTH,
    };
    let mut head: Vec<ForestNode> = enumerate_forest(n.clone(), ForestLimit::MaxDepth(split))
        .filter(|node| within(node, &limit))
        .collect();
    let frontier: Vec<ForestNode> = head
        .iter()
        .filter(|node| node.path.depth() == split)
        .cloned()
        .collect();
    let tails: Vec<Vec<ForestNode>> = frontier
        .into_par_iter()
        .map(|start| {
            let mut it = ForestIter {
                queue: VecDeque::from([start]),
                limit: limit.clone(),
            };
            it.next();
            it.collect()
        })
        .collect();
    head.extend(tails.into_iter().flatten());
    head.sort_by(|a, b| {
        a.path
            .depth()
            .cmp(&b.path.depth())
            .then_with(|| a.path.turns.cmp(&b.path.turns))
    });
    head
}

fn within(node: &ForestNode, limit: &ForestLimit) -> bool {
    match limit {
        ForestLimit::MaxDepth(d) => node.path.depth() <= *d,
        ForestLimit::MaxDenominator(q) => node.triple.q2() <= q,
    }
}

/// Stern-Brocot turns leading to a non-negative label in the tree whose
/// root edge joins `0/1` and `1/0`. `None` for the two endpoints.
fn stern_brocot_turns(label: &Rational) -> Option<Vec<Turn>> {
    if label.is_zero() || label.is_infinite() {
        return None;
    }
    let (mut lo, mut hi) = (Rational::zero(), Rational::infinity());
    let mut turns = Vec::new();
    loop {
        let m = mediant(&lo, &hi);
        match label.cmp(&m) {
            std::cmp::Ordering::Equal => return Some(turns),
            std::cmp::Ordering::Less => {
                turns.push(Turn::Left);
                hi = m;
            }
            std::cmp::Ordering::Greater => {
                turns.push(Turn::Right);
                lo = m;
            }
        }
    }
}

/// The Markov fraction in `[0, 1]` sitting at the node of `label` in the
/// Stern-Brocot tree.
pub fn mu(label: &Rational) -> Result<Rational> {
    if label.is_negative() {
        return Err(Error::NegativeLabel(label.clone()));
    }
    match stern_brocot_turns(label) {
        None if label.is_zero() => Ok(Rational::zero()),
        None => Ok(Rational::one()),
        Some(turns) => Ok(SternBrocotPath {
            base: BigInt::zero(),
            turns,
        }
        .triple()
        .x2()
        .clone()),
    }
}

pub fn mu_inverse(x: &Rational) -> Result<Rational> {
    if x.is_infinite() || x.is_negative() || *x > Rational::one() {
        return Err(Error::OutOfUnitInterval(x.clone()));
    }
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    if *x == Rational::one() {
        return Ok(Rational::infinity());
    }
    let (path, _) = descend(x).ok_or_else(|| Error::NotMarkovFraction(x.clone()))?;
    let (mut lo, mut hi) = (Rational::zero(), Rational::infinity());
    for turn in &path.turns {
        let m = mediant(&lo, &hi);
        match turn {
            Turn::Left => hi = m,
            Turn::Right => lo = m,
        }
    }
    Ok(mediant(&lo, &hi))
}

/// Markov fractions in `[0, 1/2]` grouped by denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniquenessReport {
    pub bound: BigInt,
    pub by_denominator: BTreeMap<BigInt, Vec<Rational>>,
}

impl UniquenessReport {
    pub fn duplicates(&self) -> Vec<&BigInt> {
        self.by_denominator
            .iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(q, _)| q)
            .collect()
    }
}

/// Walks the `[0, 1/2]` part of the forest up to denominator `bound`.
pub fn audit_uniqueness(bound: &BigInt) -> UniquenessReport {
    let mut report = UniquenessReport {
        bound: bound.clone(),
        by_denominator: BTreeMap::new(),
    };
    let mut record = |x: &Rational| {
        report
            .by_denominator
            .entry(x.denom().clone())
            .or_default()
            .push(x.clone());
    };
    if *bound >= BigInt::one() {
        record(&Rational::zero());
    }
    let root = RationalMarkovTriple::root(&BigInt::zero());
    if root.q2() <= bound {
        record(root.x2());
    }
    let mut stack = vec![children(&root).0];
    while let Some(t) = stack.pop() {
        if t.q2() > bound {
            continue;
        }
        record(t.x2());
        let (l, r) = children(&t);
        stack.push(r);
        stack.push(l);
    }
    for v in report.by_denominator.values_mut() {
        v.sort();
    }
    report
}

/// Markov numbers up to `bound`, by walking the tree of ordered triples.
pub fn markov_numbers_up_to(bound: &BigInt) -> Vec<BigInt> {
    let mut found = std::collections::BTreeSet::new();
    for q in [1, 2] {
        if BigInt::from(q) <= *bound {
            found.insert(BigInt::from(q));
        }
    }
    // (a, b, c) with a < b < c, starting at (1, 2, 5)
    let mut stack = vec![(BigInt::from(1), BigInt::from(2), BigInt::from(5))];
    while let Some((a, b, c)) = stack.pop() {
        if c > *bound {
            continue;
        }
        let three_c = BigInt::from(3) * &c;
        let replace_a = &three_c * &b - &a;
        let replace_b = &three_c * &a - &b;
        found.insert(c.clone());
        stack.push((b, c.clone(), replace_a));
        stack.push((a, c, replace_b));
    }
    found.into_iter().collect()
}

pub fn is_markov_number(q: &BigInt) -> bool {
    if !q.is_positive() {
        return false;
    }
    if *q <= BigInt::from(2) {
        return true;
    }
    let mut stack = vec![(BigInt::from(1), BigInt::from(2), BigInt::from(5))];
    while let Some((a, b, c)) = stack.pop() {
        if c == *q {
            return true;
        }
        if c > *q {
            continue;
        }
        let three_c = BigInt::from(3) * &c;
        let replace_a = &three_c * &b - &a;
        let replace_b = &three_c * &a - &b;
        stack.push((b, c.clone(), replace_a));
        stack.push((a, c, replace_b));
    }
    false
}
