use num_bigint::BigInt;
use thiserror::Error;

use crate::rational::Rational;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic on the sentinel 1/0")]
    Infinite,
    #[error("0/0 is not a fraction")]
    Indeterminate,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a fraction")]
    ParseRational(String),
    #[error("cannot parse {0:?} as a quadratic surd")]
    ParseSurd(String),
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("radicands {0} and {1} differ")]
    RadicandMismatch(BigInt, BigInt),
    #[error("approximant equals the target {0}")]
    ApproximantEqualsTarget(Rational),
    #[error("({0}, {1}, {2}) is not a Markov triple")]
    NotMarkovTriple(BigInt, BigInt, BigInt),
    #[error("{0} is not a Markov number")]
    NotMarkovNumber(BigInt),
    #[error("{0} is not a Markov fraction")]
    NotMarkovFraction(Rational),
    #[error("relation {0} does not hold")]
    RelationFailed(&'static str),
    #[error("{0} does not divide {1}")]
    NotDivisible(BigInt, BigInt),
    #[error("denominator of {0} is not {1}")]
    DenominatorMismatch(Rational, BigInt),
    #[error("triple is not centered")]
    NotCentered,
    #[error("position {0} is not one of 1, 2, 3")]
    InvalidPosition(usize),
    #[error("companion index {0} is below 2")]
    CompanionIndex(i64),
    #[error("label {0} is negative")]
    NegativeLabel(Rational),
    #[error("{0} lies outside [0, 1]")]
    OutOfUnitInterval(Rational),
    #[error("({0}, {1}) is not a coprime pair of non-negative integers")]
    NotCoprime(i64, i64),
    #[error("triangles {0} and {1} of the path do not share an edge")]
    DisjointTriangles(usize, usize),
    #[error("labels around triangle {0} are not Farey neighbours")]
    NotFarey(usize),
    #[error("path is degenerate at lattice point ({0}, {1})")]
    DegeneratePath(i64, i64),
    #[error("precision of {0} bits is below the minimum of {1}")]
    Precision(u32, u32),
}

pub type Result<T> = std::result::Result<T, Error>;
