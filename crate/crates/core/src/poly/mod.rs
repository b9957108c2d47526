//! Exact coefficient fields and sparse multivariate polynomials.

mod field;
mod gcd;
mod monomial;
mod multipoly;
mod parse;
mod univariate;

pub use field::{
    crt_step, is_prime_u64, prev_prime, random_prime, rational_reconstruction, Field, Fp, Rational,
};
pub use gcd::{gcd_many, gcd_with_hints, poly_gcd, trial_divide, GcdField, TrialDivision};
pub use monomial::Monomial;
pub use multipoly::{MultiPoly, Ring};
pub use parse::{format_rational, parse_poly, parse_rational};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{0}: zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("operands mix coefficient fields")]
    MixedModes,
    #[error("denominator not invertible modulo {prime}")]
    BadReduction { prime: u64 },
    #[error("trial-division candidate {0} is constant")]
    ConstantCandidate(usize),
}
