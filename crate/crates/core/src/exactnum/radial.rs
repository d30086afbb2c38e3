use std::collections::BTreeMap;
use std::fmt;

use super::poly::MultiPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Finite sum `sum_k p_k(x) * X^k` with integer (possibly negative) powers of
/// `X = x_1 + ... + x_n`.
///
/// Terms are keyed by the power `k`, so powers are distinct and ordered, and
/// zero polynomials are dropped. Terms are not reduced modulo the relation
/// `X = sum x_i`; two sums describing the same function may differ
/// structurally, which is why equality checks in this crate go through
/// evaluation.
#[derive(Clone, PartialEq, Eq)]
pub struct RadialSum {
    n: usize,
    terms: BTreeMap<i32, MultiPoly>,
}

impl RadialSum {
    pub fn zero(n: usize) -> Self {
        RadialSum { n, terms: BTreeMap::new() }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RadialSum::term(p, 0)
    }

    /// Single term `p * X^k`.
    pub fn term(p: MultiPoly, k: i32) -> Self {
        let mut r = RadialSum::zero(p.dim());
        if !p.is_zero() {
            r.terms.insert(k, p);
        }
        r
    }

    /// `c * X^k`.
    pub fn power(n: usize, c: Rational, k: i32) -> Self {
        RadialSum::term(MultiPoly::constant(n, c), k)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &MultiPoly)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    fn check_dim(&self, other_n: usize) -> Result<()> {
        if self.n != other_n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other_n });
        }
        Ok(())
    }

    fn add_term(&mut self, k: i32, p: MultiPoly) -> Result<()> {
        if p.is_zero() {
            return Ok(());
        }
        let merged = match self.terms.remove(&k) {
            Some(existing) => existing.try_add(&p)?,
            None => p,
        };
        if !merged.is_zero() {
            self.terms.insert(k, merged);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RadialSum) -> Result<RadialSum> {
        self.check_dim(other.n)?;
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> RadialSum {
        let mut out = RadialSum::zero(self.n);
        for (k, p) in &self.terms {
            let q = p.scale(c);
            if !q.is_zero() {
                out.terms.insert(*k, q);
            }
        }
        out
    }

    pub fn try_mul(&self, other: &RadialSum) -> Result<RadialSum> {
        self.check_dim(other.n)?;
        let mut out = RadialSum::zero(self.n);
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                out.add_term(k1 + k2, p1.try_mul(p2)?)?;
            }
        }
        Ok(out)
    }

    pub fn try_mul_poly(&self, p: &MultiPoly) -> Result<RadialSum> {
        self.try_mul(&RadialSum::from_poly(p.clone()))
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        let big_x: Rational = x.iter().sum();
        let mut total = Rational::zero();
        for (k, p) in &self.terms {
            let weight = if *k == 0 {
                Rational::one()
            } else if big_x.is_zero() {
                if *k < 0 {
                    return Err(Error::RadialSingularity);
                }
                Rational::zero()
            } else {
                big_x.pow(*k)?
            };
            total += p.eval(x)? * weight;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let big_x: f64 = x.iter().sum();
        self.terms.iter().map(|(k, p)| p.eval_f64(x) * big_x.powi(*k)).sum()
    }

    /// Expands into an ordinary polynomial; fails if any power of `X` is
    /// negative.
    pub fn to_poly(&self) -> Result<MultiPoly> {
        let x = MultiPoly::coordinate_sum(self.n);
        let mut out = MultiPoly::zero(self.n);
        for (k, p) in &self.terms {
            if *k < 0 {
                return Err(Error::InvalidArgument(format!("X^{k} is not polynomial; use the radial integrator")));
            }
            out = out.try_add(&p.try_mul(&x.try_pow(*k as u32)?)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for RadialSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(k, p)| if *k == 0 { format!("({p})") } else { format!("({p})*X^{k}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for RadialSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialSum[{}]({})", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn eval_examples() {
        let one = RadialSum::power(2, r(1, 1), 0);
        assert_eq!(one.eval(&[r(1, 1), r(1, 1)]).unwrap(), r(1, 1));

        // A^2 - B^2 X^-4 with A = 4, B = -3
        let minors = RadialSum::power(2, r(16, 1), 0).try_add(&RadialSum::power(2, r(-9, 1), -4)).unwrap();
        assert_eq!(minors.eval(&[r(1, 1), r(1, 1)]).unwrap(), r(247, 16));

        let x1 = RadialSum::term(MultiPoly::var(2, 0).unwrap(), -4);
        assert_eq!(x1.eval(&[r(2, 1), r(2, 1)]).unwrap(), r(1, 128));
    }

    #[test]
    fn singular_at_origin() {
        let s = RadialSum::power(2, r(1, 1), -1);
        assert_eq!(s.eval(&[r(0, 1), r(0, 1)]), Err(Error::RadialSingularity));
        let p = RadialSum::power(2, r(1, 1), 2);
        assert_eq!(p.eval(&[r(0, 1), r(0, 1)]).unwrap(), Rational::zero());
    }

    #[test]
    fn powers_merge_and_cancel() {
        let a = RadialSum::power(3, r(2, 1), -6);
        let b = RadialSum::power(3, r(-2, 1), -6);
        assert!(a.try_add(&b).unwrap().is_zero());
        let prod = RadialSum::power(3, r(1, 1), 2).try_mul(&RadialSum::power(3, r(3, 1), -5)).unwrap();
        assert_eq!(prod.terms().map(|(k, _)| k).collect::<Vec<_>>(), vec![-3]);
    }

    #[test]
    fn to_poly_expands_nonnegative_powers() {
        let s = RadialSum::power(2, r(1, 1), 2);
        let p = s.to_poly().unwrap();
        assert_eq!(p, MultiPoly::coordinate_sum(2).try_pow(2).unwrap());
        assert!(RadialSum::power(2, r(1, 1), -1).to_poly().is_err());
    }
}
