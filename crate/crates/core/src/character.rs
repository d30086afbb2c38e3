//! The toric Futaki functional and the alpha-Futaki character on the
//! blow-up family.
//!
//! For the torus generator `xi_i` with Hamiltonian avatar `x_i + c_i` on the
//! moment polytope `P` (where `c_i` makes the average zero), the normalized
//! character is
//!
//! ```text
//! (2 pi)^-n <F, xi_i> = (alpha0 / 2) int_dP (x_i + c_i) dsigma
//!                     + alpha1 int_P (x_i + c_i) e2(DU) dmu,
//! ```
//!
//! with `e2(DU)` the sum of `2 x 2` principal minors of the transition-map
//! Jacobian. No factors of `2 pi` are ever introduced.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{LogLinear, MultiPoly, RadialSum, Rational};
use crate::family::{FamilySpec, ScaledFamily, TwoParameterClass};
use crate::integrate::{c_constant, integrate_poly_boundary, integrate_radial};
use crate::polytope::{standard_blowup_polytope, Polytope};

fn check_axis(n: usize, axis: usize) -> Result<()> {
    if axis >= n {
        return Err(Error::AxisIndex { axis, n });
    }
    Ok(())
}

/// `int_dP (x_axis + c_axis) dsigma`, the classical toric Futaki invariant
/// of `xi_axis` up to normalization.
pub fn classical_futaki_axis(polytope: &Polytope, axis: usize) -> Result<Rational> {
    check_axis(polytope.dim(), axis)?;
    let n = polytope.dim();
    let c = c_constant(polytope, axis)?;
    let hamiltonian = MultiPoly::var(n, axis)?.try_add(&MultiPoly::constant(n, c))?;
    integrate_poly_boundary(polytope, &hamiltonian)
}

/// `c_axis` on `P_n(b)` from the radial integrator.
fn slab_c_constant(spec: &FamilySpec, axis: usize) -> Result<Rational> {
    let n = spec.n();
    let vol = integrate_radial(n, spec.b(), &RadialSum::power(n, Rational::one(), 0))?;
    let moment = integrate_radial(n, spec.b(), &RadialSum::from_poly(MultiPoly::var(n, axis)?))?;
    Ok(-(moment.rational / vol.rational))
}

/// Boundary term `F_i^d = int_{dP_n(b)} (x_i + c_i) dsigma`.
pub fn boundary_term(spec: &FamilySpec, axis: usize) -> Result<Rational> {
    let p = standard_blowup_polytope(spec.n(), spec.b())?;
    classical_futaki_axis(&p, axis)
}

/// Bulk term as returned by the radial integrator, log part included.
pub fn bulk_term_exact(spec: &FamilySpec, axis: usize) -> Result<LogLinear> {
    check_axis(spec.n(), axis)?;
    let n = spec.n();
    let c = slab_c_constant(spec, axis)?;
    let hamiltonian = MultiPoly::var(n, axis)?.try_add(&MultiPoly::constant(n, c))?;
    let integrand = spec.minor_sum_radial().try_mul_poly(&hamiltonian)?;
    integrate_radial(n, spec.b(), &integrand)
}

/// Bulk term `F_i^bulk = int_P (x_i + c_i) e2(DU) dmu`; errors if the log
/// coefficient fails to cancel.
pub fn bulk_term(spec: &FamilySpec, axis: usize) -> Result<Rational> {
    let v = bulk_term_exact(spec, axis)?;
    if !v.is_rational() {
        return Err(Error::LogTermNonzero(v.log_coeff));
    }
    Ok(v.rational)
}

/// `(alpha0 / 2) F_i^d + alpha1 F_i^bulk`.
pub fn alpha_futaki_axis(spec: &FamilySpec, axis: usize, alpha0: &Rational, alpha1: &Rational) -> Result<Rational> {
    let boundary = boundary_term(spec, axis)?;
    let bulk = bulk_term(spec, axis)?;
    Ok(alpha0 * boundary / Rational::integer(2) + alpha1 * bulk)
}

/// The ratio `alpha1 / alpha0` at which the character on one axis vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RequiredRatio {
    /// `-(1/2) F^d / F^bulk`.
    Value(Rational),
    /// `F^bulk = 0` while `F^d != 0`: no ratio makes the character vanish.
    Undefined,
    /// Both terms vanish: every ratio does.
    Unconstrained,
}

impl RequiredRatio {
    fn from_terms(boundary: &Rational, bulk: &Rational) -> Self {
        if bulk.is_zero() {
            if boundary.is_zero() {
                RequiredRatio::Unconstrained
            } else {
                RequiredRatio::Undefined
            }
        } else {
            RequiredRatio::Value(-(boundary / bulk) / Rational::integer(2))
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            RequiredRatio::Value(r) => Some(r),
            _ => None,
        }
    }
}

impl std::fmt::Display for RequiredRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RequiredRatio::Value(r) => write!(f, "{r}"),
            RequiredRatio::Undefined => f.write_str("undefined"),
            RequiredRatio::Unconstrained => f.write_str("unconstrained"),
        }
    }
}

impl Serialize for RequiredRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Per-axis boundary and bulk terms of one spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisTerms {
    pub c: Vec<Rational>,
    pub boundary: Vec<Rational>,
    pub bulk: Vec<Rational>,
}

pub fn axis_terms(spec: &FamilySpec) -> Result<AxisTerms> {
    let n = spec.n();
    let p = standard_blowup_polytope(n, spec.b())?;
    let mut terms =
        AxisTerms { c: Vec::with_capacity(n), boundary: Vec::with_capacity(n), bulk: Vec::with_capacity(n) };
    for i in 0..n {
        terms.c.push(slab_c_constant(spec, i)?);
        terms.boundary.push(classical_futaki_axis(&p, i)?);
        terms.bulk.push(bulk_term(spec, i)?);
    }
    Ok(terms)
}

fn ratio_from_terms(terms: &AxisTerms) -> Result<RequiredRatio> {
    let first = RequiredRatio::from_terms(&terms.boundary[0], &terms.bulk[0]);
    for i in 1..terms.boundary.len() {
        if RequiredRatio::from_terms(&terms.boundary[i], &terms.bulk[i]) != first {
            return Err(Error::AxisDisagreement { first: 0, other: i });
        }
    }
    Ok(first)
}

/// Required `alpha1 / alpha0`; all axes must give the same answer.
pub fn required_ratio(spec: &FamilySpec) -> Result<RequiredRatio> {
    ratio_from_terms(&axis_terms(spec)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// `alpha1 / alpha0` equals the required ratio (or every ratio works).
    VanishesAtRatio,
    /// The required ratio is negative and `alpha1 / alpha0 > 0`.
    ObstructedForPositiveAlpha,
    /// No ratio makes the character vanish.
    NoVanishingPossible,
    /// The character is nonzero at this ratio for another reason.
    ObstructedAtRatio,
}

fn verdict_for(required: &RequiredRatio, alpha0: &Rational, alpha1: &Rational) -> Result<Verdict> {
    if alpha0.is_zero() {
        return Err(Error::InvalidCoupling("alpha0 must be nonzero for a verdict".into()));
    }
    let ratio = alpha1 / alpha0;
    Ok(match required {
        RequiredRatio::Unconstrained => Verdict::VanishesAtRatio,
        RequiredRatio::Undefined => Verdict::NoVanishingPossible,
        RequiredRatio::Value(r) if *r == ratio => Verdict::VanishesAtRatio,
        RequiredRatio::Value(r) if r.is_negative() && ratio.is_positive() => Verdict::ObstructedForPositiveAlpha,
        RequiredRatio::Value(_) => Verdict::ObstructedAtRatio,
    })
}

pub fn verdict(spec: &FamilySpec, alpha0: &Rational, alpha1: &Rational) -> Result<Verdict> {
    if alpha0.is_zero() {
        return Err(Error::InvalidCoupling("alpha0 must be nonzero for a verdict".into()));
    }
    verdict_for(&required_ratio(spec)?, alpha0, alpha1)
}

/// Integral class `p [H] - q [E]` on the blown-up plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneClass {
    pub h: i64,
    pub e: i64,
}

impl std::fmt::Display for PlaneClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[H] - {}[E]", self.h, self.e)
    }
}

/// Keller-Friedman solution data on a ruled surface `P(O + L) -> Sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KfRuled {
    /// Coefficients of `E = e0 [E_0] + c [C]`.
    pub bundle_e0: i64,
    pub bundle_fiber: i64,
    /// Coefficients of `L = 2 [E_0] + k' [C]`.
    pub kahler_e0: i64,
    pub kahler_fiber: i64,
    /// On the blown-up plane (`h = 0`, `k = 1`), with `[C] = [H] - [E]` and
    /// `[E_0] = [H]`.
    pub bundle_plane: Option<PlaneClass>,
    pub kahler_plane: Option<PlaneClass>,
    pub ratio: Rational,
}

/// `alpha1 / alpha0 = -((2 - s) k + 2 k') / (8 k2^2 (k + k'))` with
/// `s = 2 (1 - h) / k`, and the classes it applies to.
pub fn kf_ruled_ratio(genus: i64, k: i64, kprime: i64, k1: i64, k2: i64) -> Result<KfRuled> {
    if genus < 0 {
        return Err(Error::InvalidArgument(format!("genus {genus} must be nonnegative")));
    }
    if k < 1 || kprime < 1 {
        return Err(Error::InvalidArgument(format!("k = {k} and k' = {kprime} must be positive")));
    }
    if k2 == 0 {
        return Err(Error::InvalidArgument("k2 must be nonzero".into()));
    }
    let s = Rational::new(2 * (1 - genus), k);
    let num = (Rational::integer(2) - s) * Rational::integer(k) + Rational::integer(2 * kprime);
    let den = Rational::integer(8 * k2 * k2 * (k + kprime));
    let ratio = -(num / den);
    let bundle_e0 = 2 * (k1 - k2);
    let bundle_fiber = k1 * kprime + k2 * (2 * k + kprime);
    let on_plane = genus == 0 && k == 1;
    let plane = |e0: i64, c: i64| on_plane.then_some(PlaneClass { h: e0 + c, e: c });
    Ok(KfRuled {
        bundle_e0,
        bundle_fiber,
        kahler_e0: 2,
        kahler_fiber: kprime,
        bundle_plane: plane(bundle_e0, bundle_fiber),
        kahler_plane: plane(2, kprime),
        ratio,
    })
}

/// Ratio from the character pipeline for the Keller-Friedman classes on the
/// blown-up plane, via the two-parameter reduction.
pub fn kf_pipeline_ratio(kf: &KfRuled) -> Result<Rational> {
    let (bundle, kahler) = match (&kf.bundle_plane, &kf.kahler_plane) {
        (Some(b), Some(k)) => (b, k),
        _ => return Err(Error::InvalidArgument("classes do not live on the blown-up plane".into())),
    };
    let beta = TwoParameterClass::new(Rational::integer(bundle.h), Rational::integer(bundle.e))?;
    let omega = TwoParameterClass::new(Rational::integer(kahler.h), Rational::integer(kahler.e))?;
    let scaled = ScaledFamily::new(2, &beta, &omega)?;
    match required_ratio(&scaled.spec)? {
        RequiredRatio::Value(r) => Ok(r * scaled.ratio_factor()),
        other => Err(Error::InvalidArgument(format!("required ratio is {other}"))),
    }
}

/// A published closed form for the required ratio compared against the
/// pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormCheck {
    pub formula: &'static str,
    /// `None` when the formula has a zero denominator at this point.
    pub value: Option<Rational>,
    pub discrepant: bool,
}

type ClosedForm = (&'static str, fn(&Rational, &Rational) -> Option<Rational>);

fn n2_forms() -> [ClosedForm; 2] {
    [
        ("-(b^2-1)/(b-a)^2", |a, b| {
            let d = b - a;
            (!d.is_zero()).then(|| -((b * b - Rational::one()) / (&d * &d)))
        }),
        ("-2b^2(b^2-1)/(b^2-ab)^2", |a, b| {
            let d = b * b - a * b;
            (!d.is_zero()).then(|| -(Rational::integer(2) * b * b * (b * b - Rational::one()) / (&d * &d)))
        }),
    ]
}

fn n3_forms() -> [ClosedForm; 1] {
    [("-(3b+1)(b-1)^3(b^2+b+1)/(3b(b-a)^2(b^3+b^2-b+1))", |a, b| {
        let one = Rational::one();
        let d = b - a;
        let b2 = b * b;
        let num = (Rational::integer(3) * b + &one) * (b - &one).pow(3).ok()? * (&b2 + b + &one);
        let den = Rational::integer(3) * b * &d * &d * (&b2 * b + &b2 - b + &one);
        (!den.is_zero()).then(|| -(num / den))
    })]
}

/// Printed closed forms for `n = 2, 3` evaluated at `(a, b)` and compared
/// with `required`.
pub fn closed_form_checks(n: usize, a: &Rational, b: &Rational, required: &RequiredRatio) -> Vec<ClosedFormCheck> {
    let forms: &[ClosedForm] = match n {
        2 => &n2_forms(),
        3 => &n3_forms(),
        _ => &[],
    };
    forms
        .iter()
        .map(|(formula, f)| {
            let value = f(a, b);
            let discrepant = value.as_ref() != required.value();
            ClosedFormCheck { formula, value, discrepant }
        })
        .collect()
}

/// A rational with a float rendering for human consumption.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub exact: Rational,
    pub approx: f64,
}

impl From<&Rational> for Exact {
    fn from(r: &Rational) -> Self {
        Exact { exact: r.clone(), approx: r.to_f64() }
    }
}

fn exacts(v: &[Rational]) -> Vec<Exact> {
    v.iter().map(Exact::from).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coupling {
    pub alpha0: Rational,
    pub alpha1: Rational,
    pub character: Vec<Exact>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterReport {
    pub n: usize,
    pub a: Rational,
    pub b: Rational,
    #[serde(rename = "A")]
    pub coeff_a: Rational,
    #[serde(rename = "B")]
    pub coeff_b: Rational,
    pub lambda: Rational,
    pub solvable: bool,
    pub hypothesis_violated: bool,
    pub c: Vec<Exact>,
    pub boundary: Vec<Exact>,
    pub bulk: Vec<Exact>,
    pub required_ratio: RequiredRatio,
    pub required_ratio_approx: Option<f64>,
    /// Verdict for an unspecified positive ratio `alpha1 / alpha0`.
    pub positive_alpha_verdict: Verdict,
    pub coupling: Option<Coupling>,
    pub closed_form_checks: Vec<ClosedFormCheck>,
}

impl CharacterReport {
    /// Full report; `coupling` adds the per-axis character and verdict at a
    /// specific `(alpha0, alpha1)`.
    pub fn compute(spec: &FamilySpec, coupling: Option<(Rational, Rational)>) -> Result<Self> {
        let terms = axis_terms(spec)?;
        let required = ratio_from_terms(&terms)?;
        let coupling = match coupling {
            None => None,
            Some((alpha0, alpha1)) => {
                let verdict = verdict_for(&required, &alpha0, &alpha1)?;
                let character = terms
                    .boundary
                    .iter()
                    .zip(&terms.bulk)
                    .map(|(d, v)| &alpha0 * d / Rational::integer(2) + &alpha1 * v)
                    .collect::<Vec<_>>();
                Some(Coupling { alpha0, alpha1, character: exacts(&character), verdict })
            }
        };
        let positive_alpha_verdict = match &required {
            RequiredRatio::Value(r) if !r.is_positive() => Verdict::ObstructedForPositiveAlpha,
            RequiredRatio::Undefined => Verdict::NoVanishingPossible,
            RequiredRatio::Unconstrained => Verdict::VanishesAtRatio,
            RequiredRatio::Value(_) => Verdict::ObstructedAtRatio,
        };
        Ok(CharacterReport {
            n: spec.n(),
            a: spec.a().clone(),
            b: spec.b().clone(),
            coeff_a: spec.coeff_a().clone(),
            coeff_b: spec.coeff_b().clone(),
            lambda: spec.lambda().clone(),
            solvable: spec.is_solvable(),
            hypothesis_violated: !spec.is_solvable(),
            c: exacts(&terms.c),
            boundary: exacts(&terms.boundary),
            bulk: exacts(&terms.bulk),
            required_ratio_approx: required.value().map(Rational::to_f64),
            closed_form_checks: closed_form_checks(spec.n(), spec.a(), spec.b(), &required),
            required_ratio: required,
            positive_alpha_verdict,
            coupling,
        })
    }
}
