//! Exact polynomial-method toolkit over `Z_m`.
//!
//! - [`ring`]: residue arithmetic, zero divisors, binomials mod `m`.
//! - [`poly`]: sparse multivariate polynomials, synthetic division by
//!   `x_i - a`, text parsing and canonical formatting.
//! - [`nullstellensatz`]: hypothesis checks and a constructive witness
//!   finder for the Combinatorial Nullstellensatz, plus a brute-force oracle.
//! - [`additive`]: restricted sumsets and the Erdős–Heilbronn bound.

pub mod additive;
pub mod nullstellensatz;
pub mod poly;
pub mod ring;

pub use nullstellensatz::{
    brute_force_witness, check_hypotheses, find_witness, vanishes_on_grid, CnError, CnInstance,
    Grid, HypothesisReport, Witness,
};
pub use poly::{
    format_polynomial, parse_polynomial, parse_polynomial_auto, DivisionResult, Monomial,
    PolyError, Polynomial,
};
pub use ring::{binom_mod, Element, Ring, RingError};
