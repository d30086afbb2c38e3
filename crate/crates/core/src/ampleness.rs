//! Nakai-Moishezon test for the classes `delta = a omega + b gamma` on
//! `P(O + O(-1)) -> P^1`, where
//!
//! ```text
//! a = (m1 + m2 log 3) / (2 + 3 log 3),   b = (2 m2 - 3 m1) / (2 + 3 log 3).
//! ```
//!
//! Ampleness needs `a + b > 0`, `2a - b log 3 > 0` and `b^2 log 3 > 4a^2`.
//! `log 3` is irrational, so the checks run in double precision and any
//! expression within `MARGIN` of zero is reported as marginal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub const MARGIN: f64 = 1e-12;

/// Number of random rational pairs checked by [`infeasibility_scan`].
pub const RANDOM_PAIRS: usize = 10_000;

fn log3() -> f64 {
    3f64.ln()
}

pub fn coefficients_from_m(m1: &Rational, m2: &Rational) -> Result<(f64, f64)> {
    if m1.is_zero() && m2.is_zero() {
        return Err(Error::InvalidArgument("(m1, m2) must not both vanish".into()));
    }
    Ok(coefficients_f64(m1.to_f64(), m2.to_f64()))
}

fn coefficients_f64(m1: f64, m2: f64) -> (f64, f64) {
    let l = log3();
    let d = 2.0 + 3.0 * l;
    ((m1 + m2 * l) / d, (2.0 * m2 - 3.0 * m1) / d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Marginal,
}

impl Status {
    fn of(value: f64) -> Self {
        if value.abs() < MARGIN {
            Status::Marginal
        } else if value > 0.0 {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub name: &'static str,
    /// Left side minus right side; must be strictly positive.
    pub value: f64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeCheck {
    pub m1: Option<Rational>,
    pub m2: Option<Rational>,
    pub a: f64,
    pub b: f64,
    pub checks: [Inequality; 3],
    /// All three inequalities pass; marginal counts as failing.
    pub feasible: bool,
}

pub fn nakai_check(a: f64, b: f64) -> ConeCheck {
    let l = log3();
    let values =
        [("a + b > 0", a + b), ("2a - b log 3 > 0", 2.0 * a - b * l), ("b^2 log 3 > 4a^2", b * b * l - 4.0 * a * a)];
    let checks = values.map(|(name, value)| Inequality { name, value, status: Status::of(value) });
    let feasible = checks.iter().all(|c| c.status == Status::Pass);
    ConeCheck { m1: None, m2: None, a, b, checks, feasible }
}

pub fn nakai_check_m(m1: &Rational, m2: &Rational) -> Result<ConeCheck> {
    let (a, b) = coefficients_from_m(m1, m2)?;
    Ok(ConeCheck { m1: Some(m1.clone()), m2: Some(m2.clone()), ..nakai_check(a, b) })
}

/// The inequalities rewritten in `(m1, m2)`:
/// `m1 < (1 + log sqrt 3) m2`, `m1 > 0`, `(9 log 3 - 4) m1^2 > 20 m1 m2 log 3`.
/// The first two are equivalent to the first two primitive checks; the third
/// is implied by the primitive third.
pub fn derived_chain(m1: f64, m2: f64) -> [bool; 3] {
    let l = log3();
    [m1 < (1.0 + l / 2.0) * m2, m1 > 0.0, (9.0 * l - 4.0) * m1 * m1 > 20.0 * m1 * m2 * l]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub grid_bound: i64,
    pub grid_points: usize,
    pub random_pairs: usize,
    pub seed: u64,
    pub feasible: Vec<(Rational, Rational)>,
    pub marginal: Vec<(Rational, Rational)>,
    pub infeasible: bool,
}

/// Checks every integer `(m1, m2)` in `[-bound, bound]^2` minus the origin
/// plus [`RANDOM_PAIRS`] random rationals in the same box.
pub fn infeasibility_scan(grid_bound: i64, seed: u64) -> Result<ScanSummary> {
    if grid_bound < 1 {
        return Err(Error::InvalidArgument("grid bound must be at least 1".into()));
    }
    let mut points = Vec::new();
    for m1 in -grid_bound..=grid_bound {
        for m2 in -grid_bound..=grid_bound {
            if (m1, m2) != (0, 0) {
                points.push((Rational::integer(m1), Rational::integer(m2)));
            }
        }
    }
    let grid_points = points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den_max = 1000;
    let num_max = grid_bound * den_max;
    while points.len() < grid_points + RANDOM_PAIRS {
        let q1 = rng.gen_range(1..=den_max);
        let q2 = rng.gen_range(1..=den_max);
        let m1 = Rational::new(rng.gen_range(-num_max..=num_max), q1);
        let m2 = Rational::new(rng.gen_range(-num_max..=num_max), q2);
        if m1.abs() > Rational::integer(grid_bound) || m2.abs() > Rational::integer(grid_bound) {
            continue;
        }
        if m1.is_zero() && m2.is_zero() {
            continue;
        }
        points.push((m1, m2));
    }
    let mut feasible = Vec::new();
    let mut marginal = Vec::new();
    for (m1, m2) in points {
        let check = nakai_check_m(&m1, &m2)?;
        if check.feasible {
            feasible.push((m1.clone(), m2.clone()));
        }
        if check.checks.iter().any(|c| c.status == Status::Marginal) {
            marginal.push((m1, m2));
        }
    }
    Ok(ScanSummary {
        grid_bound,
        grid_points,
        random_pairs: RANDOM_PAIRS,
        seed,
        infeasible: feasible.is_empty(),
        feasible,
        marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64) -> Rational {
        Rational::integer(p)
    }

    #[test]
    fn coefficients() {
        let (a, b) = coefficients_from_m(&r(1), &r(0)).unwrap();
        assert!((a - 0.188828).abs() < 1e-6 && (b + 0.566483).abs() < 1e-6);
        let (a, b) = coefficients_from_m(&r(0), &r(1)).unwrap();
        assert!((a - 0.207448).abs() < 1e-6 && (b - 0.377655).abs() < 1e-6);
        let (a, b) = coefficients_from_m(&r(1), &r(1)).unwrap();
        assert!((a - 0.396276).abs() < 1e-6 && (b + 0.188828).abs() < 1e-6);
        assert!(coefficients_from_m(&r(0), &r(0)).is_err());
    }

    #[test]
    fn examples() {
        let c = nakai_check_m(&r(1), &r(0)).unwrap();
        assert_eq!(c.checks[0].status, Status::Fail);
        assert!(!c.feasible);

        let c = nakai_check_m(&r(0), &r(1)).unwrap();
        assert_eq!(c.checks[0].status, Status::Pass);
        assert_eq!(c.checks[1].status, Status::Marginal);
        assert!(c.checks[1].value.abs() < 1e-15);
        assert!(!c.feasible);

        let c = nakai_check_m(&r(1), &r(1)).unwrap();
        assert_eq!(c.checks[2].status, Status::Fail);
        let (a, b) = (c.a, c.b);
        assert!((b * b * log3() - 0.03917).abs() < 1e-4);
        assert!((4.0 * a * a - 0.62814).abs() < 1e-4);
    }

    #[test]
    fn scans() {
        let s = infeasibility_scan(10, 1).unwrap();
        assert!(s.infeasible);
        assert_eq!(s.grid_points, 21 * 21 - 1);
        assert!(s.marginal.contains(&(r(0), r(1))));
        assert!(infeasibility_scan(0, 1).is_err());
        assert_eq!(infeasibility_scan(3, 9).unwrap(), infeasibility_scan(3, 9).unwrap());
    }

    proptest! {
        #[test]
        fn homogeneous(m1 in -500i64..500, m2 in -500i64..500, t in 1i64..50) {
            prop_assume!((m1, m2) != (0, 0));
            let base = nakai_check_m(&r(m1), &r(m2)).unwrap();
            let scaled = nakai_check_m(&r(t * m1), &r(t * m2)).unwrap();
            prop_assert_eq!(base.feasible, scaled.feasible);
            for (x, y) in base.checks.iter().zip(&scaled.checks) {
                if x.status != Status::Marginal && y.status != Status::Marginal {
                    prop_assert_eq!(x.status, y.status);
                }
            }
        }

        #[test]
        fn antipodal(m1 in -500i64..500, m2 in -500i64..500) {
            prop_assume!((m1, m2) != (0, 0));
            let p = nakai_check_m(&r(m1), &r(m2)).unwrap();
            let q = nakai_check_m(&r(-m1), &r(-m2)).unwrap();
            prop_assert!(!(p.feasible && q.feasible));
            prop_assert_eq!(p.checks[2].value, q.checks[2].value);
            prop_assert!((p.checks[0].value + q.checks[0].value).abs() < 1e-12);
            prop_assert!((p.checks[1].value + q.checks[1].value).abs() < 1e-12);
        }

        #[test]
        fn derived_chain_consistent(m1 in -1e3f64..1e3, m2 in -1e3f64..1e3) {
            let (a, b) = coefficients_f64(m1, m2);
            let c = nakai_check(a, b);
            let d = derived_chain(m1, m2);
            let clear = |v: f64| v.abs() > 1e-9;
            if clear(c.checks[0].value) {
                prop_assert_eq!(c.checks[0].status == Status::Pass, d[0]);
            }
            if clear(c.checks[1].value) {
                prop_assert_eq!(c.checks[1].status == Status::Pass, d[1]);
            }
            if c.checks[2].status == Status::Pass && clear(c.checks[2].value) {
                prop_assert!(d[2]);
            }
            prop_assert!(!(d[0] && d[1] && d[2]));
        }
    }
}
