//! Exact multivariate polynomial arithmetic over Q with Gröbner bases,
//! normal forms, elimination and ideal dimension, plus evaluation into
//! other commutative rings.

mod groebner;
mod ideal;
mod monomial;
mod order;
mod polynomial;
mod ring;

use num_rational::BigRational;
use thiserror::Error;

pub use groebner::{buchberger, GroebnerBasis};
pub use ideal::Ideal;
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::{PolyDisplay, Polynomial};
pub use ring::{CompiledMap, CompiledPolynomial, EvalRing, IntegersMod, RationalField};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ideal contains 1")]
    ImproperIdeal,
    #[error("denominator {denominator} is not invertible modulo {modulus}")]
    NonInvertibleDenominator { denominator: String, modulus: u64 },
    #[error("expected {expected} coordinates, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    basis.normal_form(p)
}

pub fn ideal_membership(p: &Polynomial, ideal: &Ideal) -> bool {
    ideal.contains(p)
}

pub fn elimination_ideal(ideal: &Ideal, eliminate: &[usize]) -> Ideal {
    ideal.elimination(eliminate)
}

pub fn dimension(ideal: &Ideal) -> Result<usize, PolyError> {
    ideal.dimension()
}

pub fn evaluate<R: EvalRing>(p: &Polynomial, ring: &R, point: &[R::Elem]) -> Result<R::Elem, PolyError> {
    p.evaluate(ring, point)
}
