//! Exact scalar and polynomial arithmetic.

mod loglinear;
mod parse;
mod poly;
mod radial;
mod rational;

pub use loglinear::LogLinear;
pub use parse::{parse_poly, parse_radial};
pub use poly::{Exponent, MultiPoly, MAX_TOTAL_DEGREE};
pub use radial::RadialSum;
pub use rational::{binomial, factorial, Rational};

/// Evaluates `p` at `x`; thin wrapper kept for symmetry with [`radial_eval`].
pub fn poly_eval(p: &MultiPoly, x: &[Rational]) -> crate::Result<Rational> {
    p.eval(x)
}

pub fn radial_eval(r: &RadialSum, x: &[Rational]) -> crate::Result<Rational> {
    r.eval(x)
}
