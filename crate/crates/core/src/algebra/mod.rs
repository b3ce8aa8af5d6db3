//! Exact arithmetic: rationals, sparse multivariate polynomials over a named
//! variable list, rational functions and the one-variable residue at zero.

mod poly;
mod ratfun;
mod rational;
mod residue;

pub use poly::{poly_mul, poly_pow, Monomial, Polynomial, Vars};
pub use ratfun::RationalFunction;
pub use rational::{factorial, parse_rational, parse_rational_list, rat, Rational};
pub use residue::{residue_at_zero, residue_at_zero_with};
