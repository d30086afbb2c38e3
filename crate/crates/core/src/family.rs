//! The Calabi-symmetric J-equation solution on the blow-up of `P^n` at a
//! point.
//!
//! With `[omega] = b[H] - [E]` and `[beta] = a[H] - [E]`, the moment
//! polytopes are the slabs `P_n(b)` and `P_n(a)`. When
//! `n(ab^(n-1) - 1)/(b^n - 1) > n - 1` the J-equation is solved by the radial
//! profile `f(r) = A r + B r^(1-n)` with
//!
//! ```text
//! A = (a b^(n-1) - 1) / (b^n - 1),   B = (b^n - a b^(n-1)) / (b^n - 1),
//! ```
//!
//! and the transition map between polytopes is `U(x) = (x / X) f(X) =
//! A x + B x / X^n`. Its Jacobian is the rank-one update
//! `DU = (A + B X^-n) I - n B X^(-n-1) x 1^T`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, RadialSum, Rational};
use crate::linalg;

fn check_classes(n: usize, a: &Rational, b: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be at least 2")));
    }
    let one = Rational::one();
    if *a <= one {
        return Err(Error::InvalidClass(format!("a = {a} must exceed 1")));
    }
    if *b <= one {
        return Err(Error::InvalidClass(format!("b = {b} must exceed 1")));
    }
    Ok(())
}

/// Intersection number of `n` classes `p_k [H] - q_k [E]` on the blow-up of
/// `P^n` at a point: `H^n = 1`, `E^n = (-1)^(n-1)`, mixed products vanish, so
/// the product is `prod p_k - prod q_k`.
pub fn blowup_intersection(classes: &[(Rational, Rational)]) -> Rational {
    let hp: Rational = classes.iter().map(|(p, _)| p.clone()).product();
    let ep: Rational = classes.iter().map(|(_, q)| q.clone()).product();
    hp - ep
}

/// Left-hand side `n(ab^(n-1) - 1)/(b^n - 1)` of the solvability criterion.
pub fn solvability_value(n: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    check_classes(n, a, b)?;
    let k = n as i32;
    let num = Rational::integer(n as i64) * (a * b.pow(k - 1)? - Rational::one());
    num.checked_div(&(b.pow(k)? - Rational::one()))
}

/// Strict Fang-Lai criterion `n(ab^(n-1) - 1)/(b^n - 1) > n - 1`.
pub fn solvable(n: usize, a: &Rational, b: &Rational) -> Result<bool> {
    Ok(solvability_value(n, a, b)? > Rational::integer(n as i64 - 1))
}

/// J-equation slope `lambda = n [beta][omega]^(n-1) / [omega]^n` from
/// intersection numbers.
pub fn slope_lambda_intersection(n: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    if n < 1 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let omega = (b.clone(), Rational::one());
    let beta = (a.clone(), Rational::one());
    let volume = blowup_intersection(&vec![omega.clone(); n]);
    let mut mixed = vec![omega; n - 1];
    mixed.push(beta);
    let pairing = blowup_intersection(&mixed);
    (Rational::integer(n as i64) * pairing).checked_div(&volume)
}

/// A point of the blow-up family with its derived constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    n: usize,
    a: Rational,
    b: Rational,
    #[serde(rename = "A")]
    coeff_a: Rational,
    #[serde(rename = "B")]
    coeff_b: Rational,
    lambda: Rational,
    solvable: bool,
}

impl FamilySpec {
    /// Spec for a solvable `(n, a, b)`; errors when the criterion fails.
    pub fn new(n: usize, a: Rational, b: Rational) -> Result<Self> {
        let spec = FamilySpec::new_unchecked(n, a, b)?;
        if !spec.solvable {
            return Err(Error::NotSolvable {
                value: Box::new(solvability_value(n, &spec.a, &spec.b)?),
                bound: Box::new(Rational::integer(n as i64 - 1)),
            });
        }
        Ok(spec)
    }

    /// Builds the constants even when the criterion fails; `solvable()`
    /// records the outcome.
    pub fn new_unchecked(n: usize, a: Rational, b: Rational) -> Result<Self> {
        check_classes(n, &a, &b)?;
        let k = n as i32;
        let bn = b.pow(k)?;
        let abn1 = &a * b.pow(k - 1)?;
        let denom = &bn - Rational::one();
        let coeff_a = (&abn1 - Rational::one()).checked_div(&denom)?;
        let coeff_b = (&bn - &abn1).checked_div(&denom)?;
        let lambda = Rational::integer(n as i64) * &coeff_a;
        let solvable = solvable(n, &a, &b)?;
        Ok(FamilySpec { n, a, b, coeff_a, coeff_b, lambda, solvable })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `A`, the linear coefficient of the radial profile.
    pub fn coeff_a(&self) -> &Rational {
        &self.coeff_a
    }

    /// `B`, the coefficient of `r^(1-n)` in the radial profile.
    pub fn coeff_b(&self) -> &Rational {
        &self.coeff_b
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn is_solvable(&self) -> bool {
        self.solvable
    }

    pub fn integral_class(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    fn check_point(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let big_x: Rational = x.iter().sum();
        if big_x.is_zero() {
            return Err(Error::RadialSingularity);
        }
        Ok(big_x)
    }

    /// `f(r) = A r + B r^(1-n)`.
    pub fn profile(&self, r: &Rational) -> Result<Rational> {
        Ok(&self.coeff_a * r + &self.coeff_b * r.pow(1 - self.n as i32)?)
    }

    /// `f'(r) = A - (n-1) B r^-n`.
    pub fn profile_derivative(&self, r: &Rational) -> Result<Rational> {
        let n = self.n as i32;
        Ok(&self.coeff_a - Rational::integer(n as i64 - 1) * &self.coeff_b * r.pow(-n)?)
    }

    /// `U^i(x) = A x^i + B x^i / X^n`.
    pub fn transition_map(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let big_x = self.check_point(x)?;
        let factor = &self.coeff_a + &self.coeff_b * big_x.pow(-(self.n as i32))?;
        Ok(x.iter().map(|xi| xi * &factor).collect())
    }

    /// `DU_ij = A d_ij + B (d_ij X^-n - n x^i X^(-n-1))`.
    pub fn jacobian(&self, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let big_x = self.check_point(x)?;
        let n = self.n as i32;
        let xn = big_x.pow(-n)?;
        let xn1 = big_x.pow(-n - 1)?;
        let diag = &self.coeff_a + &self.coeff_b * &xn;
        let rank_one = Rational::integer(n as i64) * &self.coeff_b * &xn1;
        Ok((0..self.n)
            .map(|i| {
                let off = -(&rank_one * &x[i]);
                (0..self.n).map(|j| if i == j { &diag + &off } else { off.clone() }).collect()
            })
            .collect())
    }

    /// Sum of the `2 x 2` principal minors of the Jacobian, from the matrix.
    pub fn minor_sum(&self, x: &[Rational]) -> Result<Rational> {
        let m = self.jacobian(x)?;
        let mut total = Rational::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                total += &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
            }
        }
        Ok(total)
    }

    /// Closed form `C(n,2) (A^2 - B^2 X^-2n)` of the minor sum.
    pub fn minor_sum_radial(&self) -> RadialSum {
        let c = binomial(self.n as u32, 2);
        let a2 = &self.coeff_a * &self.coeff_a;
        let b2 = &self.coeff_b * &self.coeff_b;
        RadialSum::power(self.n, &c * a2, 0)
            .try_add(&RadialSum::power(self.n, -(c * b2), -2 * self.n as i32))
            .expect("matching dimensions")
    }

    pub fn jacobian_trace(&self, x: &[Rational]) -> Result<Rational> {
        let m = self.jacobian(x)?;
        Ok((0..self.n).map(|i| m[i][i].clone()).sum())
    }

    pub fn jacobian_determinant(&self, x: &[Rational]) -> Result<Rational> {
        Ok(linalg::determinant(&self.jacobian(x)?))
    }

    /// `(A + B X^-n)^(n-1) (A - (n-1) B X^-n)`, the determinant read off the
    /// eigenvalues of the rank-one update.
    pub fn determinant_factored(&self, x: &[Rational]) -> Result<Rational> {
        let big_x = self.check_point(x)?;
        let n = self.n as i32;
        let s = &self.coeff_b * big_x.pow(-n)?;
        let tangential = &self.coeff_a + &s;
        let radial = &self.coeff_a - Rational::integer(n as i64 - 1) * &s;
        Ok(tangential.pow(n - 1)? * radial)
    }

    /// Images of the vertices `e_i` and `b e_i` of `P_n(b)`, in that order
    /// per axis.
    pub fn vertex_images(&self) -> Result<Vec<(Vec<Rational>, Vec<Rational>)>> {
        let mut out = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            for scale in [Rational::one(), self.b.clone()] {
                let mut v = vec![Rational::zero(); self.n];
                v[i] = scale;
                let image = self.transition_map(&v)?;
                out.push((v, image));
            }
        }
        Ok(out)
    }

    /// Whether `f' > 0` at every grid point `1 + k (b - 1)/steps`,
    /// `k = 0..=steps`.
    pub fn profile_increasing_on_grid(&self, steps: u32) -> Result<bool> {
        let h = (&self.b - Rational::one()) / Rational::integer(steps.max(1) as i64);
        for k in 0..=steps {
            let r = Rational::one() + &h * Rational::integer(k as i64);
            if !self.profile_derivative(&r)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A class `h [H] - e [E]` with `h > e > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoParameterClass {
    pub h: Rational,
    pub e: Rational,
}

impl TwoParameterClass {
    pub fn new(h: Rational, e: Rational) -> Result<Self> {
        if !e.is_positive() || h <= e {
            return Err(Error::InvalidClass(format!("need h > e > 0 for {h}[H] - {e}[E]")));
        }
        Ok(TwoParameterClass { h, e })
    }

    /// `(h/e, e)`: the normalized parameter and the scale factor with
    /// `h[H] - e[E] = e ((h/e)[H] - [E])`.
    pub fn reduce(&self) -> (Rational, Rational) {
        (&self.h / &self.e, self.e.clone())
    }
}

/// Two-parameter classes reduced to the normalized family by scaling.
///
/// Scaling `[omega]` by `s` and `[beta]` by `t` scales `P` by `s` and `U` by
/// `t / s`; the boundary term then scales by `s^n` and the bulk term by
/// `s^(n-1) t^2`, so the required ratio picks up the factor `s / t^2`.
/// Reported as experimental.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledFamily {
    pub spec: FamilySpec,
    pub omega_scale: Rational,
    pub beta_scale: Rational,
    pub experimental: bool,
}

impl ScaledFamily {
    pub fn new(n: usize, beta: &TwoParameterClass, omega: &TwoParameterClass) -> Result<Self> {
        let (a, beta_scale) = beta.reduce();
        let (b, omega_scale) = omega.reduce();
        Ok(ScaledFamily { spec: FamilySpec::new(n, a, b)?, omega_scale, beta_scale, experimental: true })
    }

    /// Multiplier taking the normalized required ratio to the scaled one.
    pub fn ratio_factor(&self) -> Rational {
        &self.omega_scale / (&self.beta_scale * &self.beta_scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn pt(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| r(p, q)).collect()
    }

    #[test]
    fn solvability_examples() {
        assert!(solvable(2, &r(11, 1), &r(3, 1)).unwrap());
        assert_eq!(solvability_value(2, &r(11, 1), &r(3, 1)).unwrap(), r(8, 1));
        assert_eq!(solvability_value(2, &r(5, 3), &r(3, 1)).unwrap(), r(1, 1));
        assert!(!solvable(2, &r(5, 3), &r(3, 1)).unwrap());
        assert_eq!(solvability_value(3, &r(3, 1), &r(2, 1)).unwrap(), r(33, 7));
        assert!(solvable(3, &r(3, 1), &r(2, 1)).unwrap());
        assert!(solvable(2, &r(1, 1), &r(3, 1)).is_err());
        assert!(solvable(2, &r(2, 1), &r(1, 2)).is_err());
    }

    #[test]
    fn spec_constants() {
        let s = FamilySpec::new(2, r(11, 1), r(3, 1)).unwrap();
        assert_eq!((s.coeff_a(), s.coeff_b(), s.lambda()), (&r(4, 1), &r(-3, 1), &r(8, 1)));
        let t = FamilySpec::new(3, r(3, 1), r(2, 1)).unwrap();
        assert_eq!((t.coeff_a(), t.coeff_b(), t.lambda()), (&r(11, 7), &r(-4, 7), &r(33, 7)));
        assert!(matches!(FamilySpec::new(2, r(5, 3), r(3, 1)), Err(Error::NotSolvable { .. })));
        let forced = FamilySpec::new_unchecked(2, r(5, 3), r(3, 1)).unwrap();
        assert!(!forced.is_solvable());
        assert!(s.integral_class());
        assert!(!FamilySpec::new(2, r(7, 2), r(3, 1)).unwrap().integral_class());
    }

    #[test]
    fn slope_from_intersections() {
        assert_eq!(slope_lambda_intersection(2, &r(11, 1), &r(3, 1)).unwrap(), r(8, 1));
        assert_eq!(slope_lambda_intersection(3, &r(3, 1), &r(2, 1)).unwrap(), r(33, 7));
        for b in [r(3, 2), r(2, 1), r(17, 5)] {
            assert_eq!(slope_lambda_intersection(2, &b, &b).unwrap(), r(2, 1));
        }
    }

    #[test]
    fn transition_map_examples() {
        let s = FamilySpec::new(2, r(11, 1), r(3, 1)).unwrap();
        assert_eq!(s.transition_map(&pt(&[(1, 1), (0, 1)])).unwrap(), pt(&[(1, 1), (0, 1)]));
        assert_eq!(s.transition_map(&pt(&[(3, 1), (0, 1)])).unwrap(), pt(&[(11, 1), (0, 1)]));
        let t = FamilySpec::new(3, r(3, 1), r(2, 1)).unwrap();
        assert_eq!(t.transition_map(&pt(&[(2, 1), (0, 1), (0, 1)])).unwrap(), pt(&[(3, 1), (0, 1), (0, 1)]));
        assert_eq!(s.transition_map(&pt(&[(0, 1), (0, 1)])), Err(Error::RadialSingularity));
    }

    #[test]
    fn transition_map_is_radial_profile() {
        let s = FamilySpec::new(3, r(9, 2), r(5, 3)).unwrap();
        let x = pt(&[(1, 3), (2, 5), (3, 4)]);
        let big_x: Rational = x.iter().sum();
        let f = s.profile(&big_x).unwrap();
        let expected: Vec<Rational> = x.iter().map(|xi| xi / &big_x * &f).collect();
        assert_eq!(s.transition_map(&x).unwrap(), expected);
    }

    #[test]
    fn jacobian_examples() {
        let s = FamilySpec::new(2, r(11, 1), r(3, 1)).unwrap();
        let m = s.jacobian(&pt(&[(1, 1), (1, 1)])).unwrap();
        assert_eq!(m, vec![pt(&[(4, 1), (3, 4)]), pt(&[(3, 4), (4, 1)])]);
        assert_eq!(s.minor_sum(&pt(&[(1, 1), (1, 1)])).unwrap(), r(247, 16));

        // n = 3 at (1,0,0): row 1 = (A - 2B, -3B, -3B), rows 2,3 diagonal A + B.
        let t = FamilySpec::new(3, r(3, 1), r(2, 1)).unwrap();
        let x = pt(&[(1, 1), (0, 1), (0, 1)]);
        let m = t.jacobian(&x).unwrap();
        let (a, b) = (t.coeff_a().clone(), t.coeff_b().clone());
        assert_eq!(m[0], vec![&a - r(2, 1) * &b, r(-3, 1) * &b, r(-3, 1) * &b]);
        assert_eq!(m[1], vec![r(0, 1), &a + &b, r(0, 1)]);
        // DU x = f'(X) x, so the first column is f'(1) e_1.
        assert_eq!(m[0][0], t.profile_derivative(&r(1, 1)).unwrap());
        assert_eq!(t.minor_sum(&x).unwrap(), r(45, 7));
    }

    #[test]
    fn finite_difference_jacobian() {
        // Exact difference quotient of U along e_j converges to DU; with a
        // tiny rational step the error is O(h).
        let s = FamilySpec::new(3, r(7, 2), r(2, 1)).unwrap();
        let x = pt(&[(1, 2), (1, 3), (3, 4)]);
        let m = s.jacobian(&x).unwrap();
        let h = r(1, 1_000_000);
        let base = s.transition_map(&x).unwrap();
        for j in 0..3 {
            let mut xp = x.clone();
            xp[j] += &h;
            let up = s.transition_map(&xp).unwrap();
            for i in 0..3 {
                let fd = (&up[i] - &base[i]) / &h;
                assert!((&fd - &m[i][j]).abs() < r(1, 10_000), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn closed_form_minor_sum_examples() {
        let s = FamilySpec::new(2, r(11, 1), r(3, 1)).unwrap();
        let expected = RadialSum::power(2, r(16, 1), 0).try_add(&RadialSum::power(2, r(-9, 1), -4)).unwrap();
        assert_eq!(s.minor_sum_radial(), expected);
        let t = FamilySpec::new(3, r(3, 1), r(2, 1)).unwrap();
        let expected =
            RadialSum::power(3, r(3 * 121, 49), 0).try_add(&RadialSum::power(3, r(-3 * 16, 49), -6)).unwrap();
        assert_eq!(t.minor_sum_radial(), expected);
    }

    #[test]
    fn endpoints_fixed() {
        for (n, a, b) in [(2, r(11, 1), r(3, 1)), (3, r(3, 1), r(2, 1)), (4, r(5, 2), r(7, 3))] {
            let s = FamilySpec::new_unchecked(n, a.clone(), b.clone()).unwrap();
            assert_eq!(s.profile(&r(1, 1)).unwrap(), r(1, 1));
            assert_eq!(s.profile(&b).unwrap(), a);
        }
    }

    #[test]
    fn monotone_iff_solvable_at_left_end() {
        assert!(FamilySpec::new(2, r(11, 1), r(3, 1)).unwrap().profile_increasing_on_grid(1000).unwrap());
        // a < b but solvable: B > 0, minimum of f' at r = 1 equals nA - (n-1).
        let s = FamilySpec::new(2, r(2, 1), r(3, 1)).unwrap();
        assert!(s.coeff_b().is_positive());
        assert!(s.profile_increasing_on_grid(1000).unwrap());
        let u = FamilySpec::new_unchecked(2, r(3, 2), r(3, 1)).unwrap();
        assert!(!u.is_solvable());
        assert!(!u.profile_increasing_on_grid(1000).unwrap());
    }

    #[test]
    fn two_parameter_reduction() {
        let beta = TwoParameterClass::new(r(11, 1), r(4, 1)).unwrap();
        let omega = TwoParameterClass::new(r(3, 1), r(1, 1)).unwrap();
        let fam = ScaledFamily::new(2, &beta, &omega).unwrap();
        assert_eq!(fam.spec.a(), &r(11, 4));
        assert_eq!(fam.ratio_factor(), r(1, 16));
        assert!(TwoParameterClass::new(r(1, 1), r(2, 1)).is_err());
    }
}
