//! Radial integration over the blow-up slab `P_n(b) = {x_i >= 0, 1 <= X <= b}`.
//!
//! Writing `x = X t` with `t` on the standard simplex `t_1 + .. + t_n = 1`
//! gives `dmu = X^(n-1) dX dnu(t)`, where `nu` is the lattice measure on the
//! simplex (total mass `1/(n-1)!`). A monomial `x^a X^k` then splits into
//! `int_1^b X^(|a|+k+n-1) dX` times the simplex moment
//! `prod(a_i!) / (n-1+|a|)!`. The only non-rational radial integral is
//! `int_1^b X^-1 dX = log b`, carried symbolically.

use crate::error::{Error, Result};
use crate::exactnum::{factorial, LogLinear, RadialSum, Rational};
use crate::polytope::Polytope;

/// `int_{t_1+..+t_n=1} t^a dnu`.
pub fn simplex_moment(exponent: &[u32]) -> Rational {
    let n = exponent.len() as u32;
    let deg: u32 = exponent.iter().sum();
    let num: Rational = exponent.iter().map(|&a| factorial(a)).product();
    num / factorial(n - 1 + deg)
}

/// `int_1^b X^m dX`.
fn power_integral(b: &Rational, m: i32) -> Result<LogLinear> {
    if m == -1 {
        return Ok(LogLinear::log(Rational::one()));
    }
    let e = m + 1;
    Ok(LogLinear::rational((b.pow(e)? - Rational::one()) / Rational::integer(e as i64)))
}

/// Exact `int_{P_n(b)} r dmu` as `q0 + q1 log b`.
pub fn integrate_radial(n: usize, b: &Rational, r: &RadialSum) -> Result<LogLinear> {
    if n == 0 {
        return Err(Error::Degenerate("dimension must be at least 1".into()));
    }
    if *b <= Rational::one() {
        return Err(Error::InvalidClass(format!("b = {b} must exceed 1")));
    }
    if r.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: r.dim() });
    }
    let mut total = LogLinear::zero();
    for (k, p) in r.terms() {
        for (e, c) in p.terms() {
            let deg: u32 = e.iter().sum();
            let m = deg as i32 + k + n as i32 - 1;
            let radial = power_integral(b, m)?;
            total = total + radial.scale(&(c * simplex_moment(e)));
        }
    }
    Ok(total)
}

/// [`integrate_radial`] for a polytope that must be a blow-up slab.
pub fn integrate_radial_over(polytope: &Polytope, r: &RadialSum) -> Result<LogLinear> {
    let b = polytope.blowup_slab_parameter().ok_or(Error::NotSlab)?;
    integrate_radial(polytope.dim(), &b, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::MultiPoly;
    use crate::integrate::integrate_poly;
    use crate::polytope::{standard_blowup_polytope, unit_simplex};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn examples() {
        let one = RadialSum::power(2, r(1, 1), 0);
        assert_eq!(integrate_radial(2, &r(3, 1), &one).unwrap(), LogLinear::rational(r(4, 1)));

        let t = RadialSum::term(MultiPoly::var(2, 0).unwrap(), -4);
        assert_eq!(integrate_radial(2, &r(3, 1), &t).unwrap(), LogLinear::rational(r(1, 3)));

        let l = RadialSum::power(2, r(1, 1), -2);
        assert_eq!(integrate_radial(2, &r(3, 1), &l).unwrap(), LogLinear::log(r(1, 1)));
    }

    #[test]
    fn simplex_moments() {
        assert_eq!(simplex_moment(&[0, 0]), r(1, 1));
        assert_eq!(simplex_moment(&[0, 0, 0]), r(1, 2));
        assert_eq!(simplex_moment(&[1, 0, 0]), r(1, 6));
        assert_eq!(simplex_moment(&[2, 1]), r(2, 24));
    }

    #[test]
    fn agrees_with_triangulation_for_polynomials() {
        let b = r(7, 3);
        for n in 2..=4 {
            let p = standard_blowup_polytope(n, &b).unwrap();
            let f = MultiPoly::var(n, 0)
                .unwrap()
                .try_mul(&MultiPoly::var(n, n - 1).unwrap())
                .unwrap()
                .try_add(&MultiPoly::constant(n, r(-2, 5)))
                .unwrap();
            let radial =
                RadialSum::from_poly(f.clone()).try_add(&RadialSum::term(MultiPoly::var(n, 1).unwrap(), 2)).unwrap();
            let exact = integrate_radial(n, &b, &radial).unwrap();
            assert!(exact.is_rational());
            assert_eq!(exact.rational, integrate_poly(&p, &radial.to_poly().unwrap()).unwrap());
        }
    }

    #[test]
    fn rejects_non_slab() {
        let s = unit_simplex(2).unwrap();
        assert_eq!(integrate_radial_over(&s, &RadialSum::power(2, r(1, 1), 0)), Err(Error::NotSlab));
        assert!(integrate_radial(2, &r(1, 1), &RadialSum::zero(2)).is_err());
    }
}
