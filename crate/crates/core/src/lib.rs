//! Markov fractions, their companions, and the approximation constants
//! `C(x) = min q^2 |x - p/q|` of rationals, computed exactly.

pub mod approximation;
pub mod companions;
pub mod eisenstein;
pub mod error;
pub mod forest;
pub mod identities;
pub mod rational;
pub mod records;
pub mod surd;

pub use error::{Error, Result};
pub use rational::Rational;
pub use surd::QuadraticSurd;
