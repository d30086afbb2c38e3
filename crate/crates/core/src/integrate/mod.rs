//! Exact integration over polytope bodies (`dmu`, Lebesgue) and facets
//! (`dsigma`, the lattice-normalized boundary measure with
//! `dsigma ^ dl_i = +-dmu` on `l_i = 0`).
//!
//! Bodies and facets are triangulated and each monomial is integrated in
//! barycentric coordinates with the Dirichlet moment
//! `int_S lambda^a = mass(S) * d! * prod(a_k!) / (d + |a|)!`.

mod monte_carlo;
mod radial;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, MultiPoly, Rational};
use crate::linalg::{self, Matrix};
use crate::polytope::{Polytope, Simplex};

pub use monte_carlo::{mc_integrate, Integrand, McEstimate, MC_BLOCK_SIZE};
pub use radial::{integrate_radial, integrate_radial_over, simplex_moment};

/// Integral of `p` over a `d`-simplex of measure `mass` (intrinsic `d` taken
/// from the vertex count).
fn integrate_on_simplex(p: &MultiPoly, simplex: &Simplex, mass: &Rational) -> Result<Rational> {
    let n = simplex.ambient_dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
    }
    let d = simplex.dim();
    let bary = d + 1;
    // x_i = sum_k lambda_k v_k[i]
    let images: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let coeffs: Vec<Rational> = simplex.vertices().iter().map(|v| v[i].clone()).collect();
            MultiPoly::affine(&coeffs, Rational::zero())
        })
        .collect();
    let pulled = if n == 0 { p.clone() } else { p.compose(&images)? };
    if pulled.dim() != bary && !pulled.is_zero() {
        return Err(Error::DimensionMismatch { expected: bary, got: pulled.dim() });
    }
    let scale = mass * factorial(d as u32);
    let mut total = Rational::zero();
    for (e, c) in pulled.terms() {
        let deg: u32 = e.iter().sum();
        let num: Rational = e.iter().map(|&a| factorial(a)).product();
        total += c * &num / factorial(d as u32 + deg);
    }
    Ok(total * scale)
}

/// `int_P p dmu`.
pub fn integrate_poly(polytope: &Polytope, p: &MultiPoly) -> Result<Rational> {
    if p.dim() != polytope.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: p.dim() });
    }
    let mut total = Rational::zero();
    for s in polytope.triangulate() {
        let vol = s.volume()?;
        total += integrate_on_simplex(p, &s, &vol)?;
    }
    Ok(total)
}

pub fn volume(polytope: &Polytope) -> Rational {
    polytope.triangulate().iter().map(|s| s.volume().expect("full-dimensional simplex")).sum()
}

/// Carrier of the lattice facet measure on facet `l_i = 0`.
///
/// For a transversal integer vector `w` with `<v, w> != 0`, the measure of
/// the parallelepiped spanned by facet edges `u_1 .. u_{n-1}` is
/// `|det[u_1, .., u_{n-1}, w]| / |<v, w>|`; the value does not depend on `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetMeasureContext {
    facet: usize,
    normal: Vec<i64>,
    transversal: Vec<i64>,
    pairing: i64,
}

impl FacetMeasureContext {
    /// Uses the first coordinate direction not parallel to the facet.
    pub fn new(polytope: &Polytope, facet: usize) -> Result<Self> {
        let h = polytope.facet(facet)?;
        let j = h.normal().iter().position(|&v| v != 0).expect("nonzero normal");
        let mut w = vec![0; polytope.dim()];
        w[j] = 1;
        FacetMeasureContext::with_transversal(polytope, facet, w)
    }

    pub fn with_transversal(polytope: &Polytope, facet: usize, transversal: Vec<i64>) -> Result<Self> {
        let h = polytope.facet(facet)?;
        if transversal.len() != polytope.dim() {
            return Err(Error::DimensionMismatch { expected: polytope.dim(), got: transversal.len() });
        }
        let pairing: i64 = h.normal().iter().zip(&transversal).map(|(a, b)| a * b).sum();
        if pairing == 0 {
            return Err(Error::BadTransversal);
        }
        Ok(FacetMeasureContext { facet, normal: h.normal().to_vec(), transversal, pairing })
    }

    pub fn facet(&self) -> usize {
        self.facet
    }

    pub fn transversal(&self) -> &[i64] {
        &self.transversal
    }

    /// Measure of the parallelepiped spanned by `edges` (`n - 1` vectors).
    pub fn parallelepiped_measure(&self, edges: &Matrix) -> Rational {
        let mut cols: Matrix = edges.clone();
        cols.push(self.transversal.iter().map(|&w| Rational::integer(w)).collect());
        // det(M) = det(M^T); rows are fine.
        linalg::determinant(&cols).abs() / Rational::integer(self.pairing.abs())
    }

    pub fn simplex_measure(&self, simplex: &Simplex) -> Result<Rational> {
        let n = self.normal.len();
        if simplex.dim() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, got: simplex.dim() });
        }
        Ok(self.parallelepiped_measure(&simplex.edges()) / factorial((n - 1) as u32))
    }
}

/// `int_{F_i} p dsigma` over facet `facet`.
pub fn integrate_poly_facet(polytope: &Polytope, facet: usize, p: &MultiPoly) -> Result<Rational> {
    let ctx = FacetMeasureContext::new(polytope, facet)?;
    integrate_poly_facet_with(polytope, &ctx, p)
}

pub fn integrate_poly_facet_with(polytope: &Polytope, ctx: &FacetMeasureContext, p: &MultiPoly) -> Result<Rational> {
    if p.dim() != polytope.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: p.dim() });
    }
    let mut total = Rational::zero();
    for s in polytope.facet_triangulate(ctx.facet())? {
        let mass = ctx.simplex_measure(&s)?;
        total += integrate_on_simplex(p, &s, &mass)?;
    }
    Ok(total)
}

/// `int_{dP} p dsigma`, summed over all facets.
pub fn integrate_poly_boundary(polytope: &Polytope, p: &MultiPoly) -> Result<Rational> {
    let mut total = Rational::zero();
    for i in 0..polytope.facet_count() {
        total += integrate_poly_facet(polytope, i, p)?;
    }
    Ok(total)
}

/// The constant `c` with `int_P (x_axis + c) dmu = 0`.
pub fn c_constant(polytope: &Polytope, axis: usize) -> Result<Rational> {
    let vol = volume(polytope);
    if vol.is_zero() {
        return Err(Error::Degenerate("zero volume".into()));
    }
    let moment = integrate_poly(polytope, &MultiPoly::var(polytope.dim(), axis)?)?;
    Ok(-(moment / vol))
}
