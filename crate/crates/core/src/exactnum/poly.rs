use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Largest total degree a stored monomial may reach.
pub const MAX_TOTAL_DEGREE: u32 = 64;

/// Exponent multi-index of a monomial.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial over the rationals in `n` variables.
///
/// Terms are kept in a `BTreeMap`, so iteration (and hence printing and
/// serialization) follows lexicographic order on exponents. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Exponent, Rational>,
}

fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        MultiPoly::constant(n, Rational::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::AxisIndex { axis: i, n });
        }
        let mut e = vec![0; n];
        e[i] = 1;
        Ok(MultiPoly { n, terms: BTreeMap::from([(e, Rational::one())]) })
    }

    /// `X = x_1 + ... + x_n`.
    pub fn coordinate_sum(n: usize) -> Self {
        let mut p = MultiPoly::zero(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            p.terms.insert(e, Rational::one());
        }
        p
    }

    pub fn monomial(coeff: Rational, exponent: Exponent) -> Result<Self> {
        let deg = total_degree(&exponent);
        if deg > MAX_TOTAL_DEGREE {
            return Err(Error::DegreeLimit { degree: deg, limit: MAX_TOTAL_DEGREE });
        }
        let n = exponent.len();
        let mut p = MultiPoly::zero(n);
        if !coeff.is_zero() {
            p.terms.insert(exponent, coeff);
        }
        Ok(p)
    }

    /// Affine function `sum_i coeffs[i] x_i + constant`.
    pub fn affine(coeffs: &[Rational], constant: Rational) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant coefficient if the polynomial has degree 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.n]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_dim(&self, other: &MultiPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&other.scale(&Rational::integer(-1)))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly { n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other)?;
        if self.degree() + other.degree() > MAX_TOTAL_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeLimit { degree: self.degree() + other.degree(), limit: MAX_TOTAL_DEGREE });
        }
        let mut out = MultiPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, exp: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.n);
        for _ in 0..exp {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    term *= &xi.pow(k as i32)?;
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| x.iter().zip(e).fold(c.to_f64(), |acc, (xi, &k)| acc * xi.powi(k as i32))).sum()
    }

    /// Substitutes `x_i := images[i]`, where every image lives in a common
    /// target ring of dimension `m`.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: images.len() });
        }
        let m = images.first().map(|p| p.n).unwrap_or(0);
        if let Some(bad) = images.iter().find(|p| p.n != m) {
            return Err(Error::DimensionMismatch { expected: m, got: bad.n });
        }
        // Cache powers of each image so repeated exponents are not recomputed.
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(p.n), p.clone()]).collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().try_mul(&images[i])?;
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.try_mul(&powers[i][k])?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Polynomial `q(x) = p(x + t)`.
    pub fn shift(&self, t: &[Rational]) -> Result<MultiPoly> {
        if t.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: t.len() });
        }
        let images: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                let mut c = vec![Rational::zero(); self.n];
                c[i] = Rational::one();
                MultiPoly::affine(&c, t[i].clone())
            })
            .collect();
        self.compose(&images)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.n, self)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
