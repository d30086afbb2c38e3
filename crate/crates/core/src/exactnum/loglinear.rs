use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use super::rational::Rational;

/// The value `rational + log_coeff * log(b)` for a base `b` supplied by
/// context.
///
/// `log b` is treated as transcendental over the rationals, so two values are
/// equal exactly when both components are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct LogLinear {
    pub rational: Rational,
    pub log_coeff: Rational,
}

impl LogLinear {
    pub fn new(rational: Rational, log_coeff: Rational) -> Self {
        LogLinear { rational, log_coeff }
    }

    pub fn rational(value: Rational) -> Self {
        LogLinear { rational: value, log_coeff: Rational::zero() }
    }

    pub fn log(coeff: Rational) -> Self {
        LogLinear { rational: Rational::zero(), log_coeff: coeff }
    }

    pub fn zero() -> Self {
        LogLinear::default()
    }

    pub fn is_rational(&self) -> bool {
        self.log_coeff.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LogLinear { rational: &self.rational * c, log_coeff: &self.log_coeff * c }
    }

    pub fn to_f64(&self, base: &Rational) -> f64 {
        let r = self.rational.to_f64();
        if self.log_coeff.is_zero() {
            r
        } else {
            r + self.log_coeff.to_f64() * base.to_f64().ln()
        }
    }
}

impl Add for LogLinear {
    type Output = LogLinear;
    fn add(self, rhs: LogLinear) -> LogLinear {
        LogLinear { rational: self.rational + rhs.rational, log_coeff: self.log_coeff + rhs.log_coeff }
    }
}

impl Sub for LogLinear {
    type Output = LogLinear;
    fn sub(self, rhs: LogLinear) -> LogLinear {
        LogLinear { rational: self.rational - rhs.rational, log_coeff: self.log_coeff - rhs.log_coeff }
    }
}

impl Neg for LogLinear {
    type Output = LogLinear;
    fn neg(self) -> LogLinear {
        LogLinear { rational: -self.rational, log_coeff: -self.log_coeff }
    }
}
