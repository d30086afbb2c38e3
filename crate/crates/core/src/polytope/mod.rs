//! Half-space polytopes with primitive integer normals.
//!
//! A polytope is `{x : <x, v_i> + lam_i >= 0}` for primitive `v_i` in `Z^n`
//! and rational `lam_i`. Construction enumerates vertices exactly, rejects
//! unbounded, empty and lower-dimensional inputs, and drops redundant
//! half-spaces so that every remaining index names a facet.

mod triangulate;

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::linalg::{self, Matrix};

pub use triangulate::Simplex;

/// Upper bound on the number of `n`-subsets of half-spaces examined during
/// vertex enumeration.
pub const SUBSET_CAP: u128 = 100_000;

/// `l(x) = <x, v> + lam >= 0` with `v` primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    #[serde(rename = "v")]
    normal: Vec<i64>,
    #[serde(rename = "lam")]
    offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Result<Self> {
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidHalfSpace("zero normal".into()));
        }
        if g != 1 {
            return Err(Error::InvalidHalfSpace(format!("normal {normal:?} is not primitive (gcd {g})")));
        }
        Ok(HalfSpace { normal, offset })
    }

    /// Rescales an arbitrary nonzero integer normal to its primitive
    /// representative, dividing the offset by the same factor.
    pub fn normalized(normal: Vec<i64>, offset: Rational) -> Result<Self> {
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidHalfSpace("zero normal".into()));
        }
        let v = normal.iter().map(|x| x / g).collect();
        HalfSpace::new(v, offset / Rational::integer(g))
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal_rational(&self) -> Vec<Rational> {
        self.normal.iter().map(|&v| Rational::integer(v)).collect()
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        self.normal.iter().zip(x).filter(|(v, _)| **v != 0).map(|(&v, xi)| xi * Rational::integer(v)).sum::<Rational>()
            + &self.offset
    }
}

/// Serialized form: `{ "n": int, "halfspaces": [{"v": [int], "lam": "p/q"}] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub n: usize,
    pub halfspaces: Vec<HalfSpace>,
}

/// Bounded, full-dimensional polytope in half-space form with cached
/// vertices. Vertices are sorted lexicographically; facets are indexed by
/// position in [`Polytope::halfspaces`].
#[derive(Clone, Debug)]
pub struct Polytope {
    n: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vec<Rational>>,
    /// Facet indices tight at each vertex.
    tight: Vec<Vec<usize>>,
    pruned: usize,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.halfspaces == other.halfspaces
    }
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Polytope {
    pub fn new(n: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degenerate("dimension must be at least 1".into()));
        }
        if let Some(h) = halfspaces.iter().find(|h| h.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: h.dim() });
        }
        let count = binomial_u128(halfspaces.len(), n);
        if count > SUBSET_CAP {
            return Err(Error::SubsetCap { count, limit: SUBSET_CAP });
        }

        let normals: Matrix = halfspaces.iter().map(HalfSpace::normal_rational).collect();
        check_bounded(&normals, n)?;

        let vertex_set = enumerate_vertices(n, &halfspaces, &normals);
        if vertex_set.is_empty() {
            return Err(Error::Empty);
        }
        let vertices: Vec<Vec<Rational>> = vertex_set.into_iter().collect();
        let refs: Vec<&[Rational]> = vertices.iter().map(Vec::as_slice).collect();
        if linalg::affine_dim(&refs) != Some(n) {
            return Err(Error::Degenerate("polytope is not full-dimensional".into()));
        }

        // Keep only half-spaces whose tight set spans a hyperplane, and only
        // the first of any duplicates.
        let mut kept = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let total = halfspaces.len();
        for h in halfspaces {
            let tight: Vec<usize> = (0..vertices.len()).filter(|&v| h.value_at(&vertices[v]).is_zero()).collect();
            let pts: Vec<&[Rational]> = tight.iter().map(|&v| vertices[v].as_slice()).collect();
            if linalg::affine_dim(&pts) == Some(n - 1) && seen.insert(tight) {
                kept.push(h);
            }
        }
        let tight =
            vertices.iter().map(|x| (0..kept.len()).filter(|&i| kept[i].value_at(x).is_zero()).collect()).collect();
        Ok(Polytope { n, pruned: total - kept.len(), halfspaces: kept, vertices, tight })
    }

    pub fn from_spec(spec: PolytopeSpec) -> Result<Self> {
        Polytope::new(spec.n, spec.halfspaces)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let spec: PolytopeSpec =
            serde_json::from_str(src).map_err(|e| Error::InvalidArgument(format!("polytope JSON: {e}")))?;
        Polytope::from_spec(spec)
    }

    pub fn to_spec(&self) -> PolytopeSpec {
        PolytopeSpec { n: self.n, halfspaces: self.halfspaces.clone() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn facet_count(&self) -> usize {
        self.halfspaces.len()
    }

    /// Number of redundant half-spaces dropped at construction.
    pub fn pruned_count(&self) -> usize {
        self.pruned
    }

    pub fn facet(&self, index: usize) -> Result<&HalfSpace> {
        self.halfspaces.get(index).ok_or(Error::FacetIndex { index, count: self.halfspaces.len() })
    }

    /// Exact vertex set in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Facet indices meeting at vertex `v`.
    pub fn tight_facets(&self, v: usize) -> &[usize] {
        &self.tight[v]
    }

    /// Indices (into [`Polytope::vertices`]) of the vertices on facet `index`.
    pub fn facet_vertices(&self, index: usize) -> Result<Vec<usize>> {
        self.facet(index)?;
        Ok((0..self.vertices.len()).filter(|&v| self.tight[v].contains(&index)).collect())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n && self.halfspaces.iter().all(|h| !h.value_at(x).is_negative())
    }

    /// Axis-aligned bounding box `(lower, upper)` of the vertex set.
    pub fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
        let lo = (0..self.n).map(|i| self.vertices.iter().map(|v| &v[i]).min().unwrap().clone()).collect();
        let hi = (0..self.n).map(|i| self.vertices.iter().map(|v| &v[i]).max().unwrap().clone()).collect();
        (lo, hi)
    }

    /// Delzant test: at every vertex exactly `n` facets meet and their
    /// normals form a unimodular matrix.
    pub fn is_delzant(&self) -> bool {
        self.tight.iter().all(|facets| {
            if facets.len() != self.n {
                return false;
            }
            let m: Matrix = facets.iter().map(|&i| self.halfspaces[i].normal_rational()).collect();
            linalg::determinant(&m).abs().is_one()
        })
    }

    /// The translate `P + t`: offsets become `lam_i - <t, v_i>`.
    pub fn translate(&self, t: &[i64]) -> Result<Polytope> {
        if t.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: t.len() });
        }
        let shifted = self
            .halfspaces
            .iter()
            .map(|h| {
                let dot: i64 = h.normal.iter().zip(t).map(|(v, s)| v * s).sum();
                HalfSpace { normal: h.normal.clone(), offset: &h.offset - Rational::integer(dot) }
            })
            .collect();
        Polytope::new(self.n, shifted)
    }

    /// The same polytope with its half-spaces listed in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Polytope> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.halfspaces.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument("not a permutation of the facet indices".into()));
        }
        Polytope::new(self.n, order.iter().map(|&i| self.halfspaces[i].clone()).collect())
    }

    /// If this is the blow-up slab `{x_i >= 0, 1 <= X <= b}` (in any facet
    /// order), returns `b`.
    pub fn blowup_slab_parameter(&self) -> Option<Rational> {
        let outer = self.halfspaces.iter().find(|h| h.normal.iter().all(|&v| v == -1))?;
        let b = outer.offset.clone();
        let reference = standard_blowup_polytope(self.n, &b).ok()?;
        let mine: BTreeSet<_> = self.halfspaces.iter().map(|h| (h.normal.clone(), h.offset.clone())).collect();
        let theirs: BTreeSet<_> = reference.halfspaces.iter().map(|h| (h.normal.clone(), h.offset.clone())).collect();
        (mine == theirs).then_some(b)
    }
}

fn check_bounded(normals: &Matrix, n: usize) -> Result<()> {
    if linalg::rank(normals) < n {
        return Err(Error::Unbounded);
    }
    // Pointed recession cone: it is nonzero iff one of its candidate extreme
    // rays (kernels of n-1 independent normals) satisfies every constraint.
    let mut unbounded = false;
    for_each_subset(normals.len(), n - 1, |subset| {
        if unbounded {
            return;
        }
        let rows: Matrix = subset.iter().map(|&i| normals[i].clone()).collect();
        if let Some(d) = linalg::kernel_line(&rows, n) {
            let signs: Vec<i32> = normals.iter().map(|v| linalg::dot(v, &d).signum()).collect();
            if signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0) {
                unbounded = true;
            }
        }
    });
    if unbounded {
        Err(Error::Unbounded)
    } else {
        Ok(())
    }
}

fn enumerate_vertices(n: usize, halfspaces: &[HalfSpace], normals: &Matrix) -> BTreeSet<Vec<Rational>> {
    let mut found = BTreeSet::new();
    for_each_subset(halfspaces.len(), n, |subset| {
        let a: Matrix = subset.iter().map(|&i| normals[i].clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| -halfspaces[i].offset.clone()).collect();
        if let Some(x) = linalg::solve(&a, &rhs) {
            if halfspaces.iter().all(|h| !h.value_at(&x).is_negative()) {
                found.insert(x);
            }
        }
    });
    found
}

/// `{x : x_i >= 0, 1 <= x_1 + ... + x_n <= b}`, the moment polytope of the
/// class `b[H] - [E]` on the blow-up of `P^n` at a point.
///
/// Facet order: the `n` coordinate facets, then `X = 1`, then `X = b`.
pub fn standard_blowup_polytope(n: usize, b: &Rational) -> Result<Polytope> {
    if n == 0 {
        return Err(Error::Degenerate("dimension must be at least 1".into()));
    }
    if *b <= Rational::one() {
        return Err(Error::InvalidClass(format!("b = {b} must exceed 1 for a Kahler class")));
    }
    let mut hs = Vec::with_capacity(n + 2);
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        hs.push(HalfSpace { normal: v, offset: Rational::zero() });
    }
    hs.push(HalfSpace { normal: vec![1; n], offset: Rational::integer(-1) });
    hs.push(HalfSpace { normal: vec![-1; n], offset: b.clone() });
    Polytope::new(n, hs)
}

/// `[lo, hi]^n` as a polytope.
pub fn cube(n: usize, lo: &Rational, hi: &Rational) -> Result<Polytope> {
    let mut hs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        hs.push(HalfSpace { normal: v.clone(), offset: -lo.clone() });
        v[i] = -1;
        hs.push(HalfSpace { normal: v, offset: hi.clone() });
    }
    Polytope::new(n, hs)
}

/// Standard simplex `{x_i >= 0, X <= 1}`.
pub fn unit_simplex(n: usize) -> Result<Polytope> {
    let mut hs = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        hs.push(HalfSpace { normal: v, offset: Rational::zero() });
    }
    hs.push(HalfSpace { normal: vec![-1; n], offset: Rational::one() });
    Polytope::new(n, hs)
}
