use std::collections::BTreeSet;

use super::Polytope;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, Rational};
use crate::linalg::{self, Matrix};

/// A simplex given by affinely independent rational vertices. Body simplices
/// have `n + 1` vertices, facet simplices `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Vec<Rational>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<Rational>>) -> Result<Self> {
        let refs: Vec<&[Rational]> = vertices.iter().map(Vec::as_slice).collect();
        if linalg::affine_dim(&refs) != Some(vertices.len().saturating_sub(1)) {
            return Err(Error::Degenerate("simplex vertices are affinely dependent".into()));
        }
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Intrinsic dimension (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Edge vectors `v_k - v_0`.
    pub fn edges(&self) -> Matrix {
        let v0 = &self.vertices[0];
        self.vertices[1..].iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect()
    }

    /// Lebesgue volume of a full-dimensional simplex, `|det(edges)| / n!`.
    pub fn volume(&self) -> Result<Rational> {
        let n = self.ambient_dim();
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.dim() });
        }
        Ok(linalg::determinant(&self.edges()).abs() / factorial(n as u32))
    }
}

impl Polytope {
    /// Pulling triangulation from the lexicographically smallest vertex.
    pub fn triangulate(&self) -> Vec<Simplex> {
        self.triangulate_from(0).expect("vertex 0 exists")
    }

    /// Pulling triangulation whose top-level apex is vertex `root`. Lower
    /// faces are always pulled from their smallest vertex.
    pub fn triangulate_from(&self, root: usize) -> Result<Vec<Simplex>> {
        if root >= self.vertices.len() {
            return Err(Error::InvalidArgument(format!("root vertex {root} out of range")));
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.pull(&all, self.n, root, &mut out);
        Ok(self.to_simplices(out))
    }

    /// Triangulation of facet `index` into `(n-1)`-simplices.
    pub fn facet_triangulate(&self, index: usize) -> Result<Vec<Simplex>> {
        let face = self.facet_vertices(index)?;
        if face.is_empty() {
            return Err(Error::Degenerate(format!("facet {index} is empty")));
        }
        let mut out = Vec::new();
        self.pull(&face, self.n - 1, face[0], &mut out);
        Ok(self.to_simplices(out))
    }

    fn to_simplices(&self, index_sets: Vec<Vec<usize>>) -> Vec<Simplex> {
        index_sets
            .into_iter()
            .map(|s| Simplex { vertices: s.into_iter().map(|v| self.vertices[v].clone()).collect() })
            .collect()
    }

    fn face_dim(&self, face: &[usize]) -> Option<usize> {
        let pts: Vec<&[Rational]> = face.iter().map(|&v| self.vertices[v].as_slice()).collect();
        linalg::affine_dim(&pts)
    }

    /// Codimension-one faces of the face spanned by `face` (of dimension
    /// `dim`), each as a sorted vertex-index list.
    fn subfaces(&self, face: &[usize], dim: usize) -> BTreeSet<Vec<usize>> {
        let mut found = BTreeSet::new();
        for j in 0..self.halfspaces.len() {
            let sub: Vec<usize> = face.iter().copied().filter(|&v| self.tight[v].contains(&j)).collect();
            if sub.len() < face.len() && !sub.is_empty() && self.face_dim(&sub) == Some(dim - 1) {
                found.insert(sub);
            }
        }
        found
    }

    fn pull(&self, face: &[usize], dim: usize, root: usize, out: &mut Vec<Vec<usize>>) {
        if dim == 0 {
            out.push(vec![face[0]]);
            return;
        }
        for sub in self.subfaces(face, dim) {
            if sub.contains(&root) {
                continue;
            }
            let mut pieces = Vec::new();
            self.pull(&sub, dim - 1, sub[0], &mut pieces);
            for mut piece in pieces {
                piece.insert(0, root);
                out.push(piece);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cube, standard_blowup_polytope, unit_simplex};
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn total_volume(s: &[Simplex]) -> Rational {
        s.iter().map(|x| x.volume().unwrap()).sum()
    }

    #[test]
    fn body_volumes() {
        let p2 = standard_blowup_polytope(2, &r(3, 1)).unwrap();
        assert_eq!(total_volume(&p2.triangulate()), r(4, 1));

        let s = unit_simplex(2).unwrap();
        let t = s.triangulate();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].volume().unwrap(), r(1, 2));

        let p3 = standard_blowup_polytope(3, &r(2, 1)).unwrap();
        assert_eq!(total_volume(&p3.triangulate()), r(7, 6));
    }

    #[test]
    fn volume_independent_of_root() {
        let p = standard_blowup_polytope(3, &r(5, 2)).unwrap();
        let reference = total_volume(&p.triangulate());
        for root in 0..p.vertices().len() {
            assert_eq!(total_volume(&p.triangulate_from(root).unwrap()), reference);
        }
        let c = cube(3, &r(-1, 1), &r(1, 1)).unwrap();
        for root in 0..8 {
            assert_eq!(total_volume(&c.triangulate_from(root).unwrap()), r(8, 1));
        }
    }

    #[test]
    fn facet_segments() {
        let p = standard_blowup_polytope(2, &r(3, 1)).unwrap();
        // facet 1 is x2 = 0
        let seg = p.facet_triangulate(1).unwrap();
        assert_eq!(seg.len(), 1);
        assert_eq!(seg[0].vertices(), &[vec![r(1, 1), r(0, 1)], vec![r(3, 1), r(0, 1)]]);
        // facet 3 is X = 3
        let outer = p.facet_triangulate(3).unwrap();
        assert_eq!(outer.len(), 1);
        assert_eq!(outer[0].vertices(), &[vec![r(0, 1), r(3, 1)], vec![r(3, 1), r(0, 1)]]);
        assert!(matches!(p.facet_triangulate(4), Err(Error::FacetIndex { .. })));
    }

    #[test]
    fn facet_of_three_dimensional_slab() {
        let p = standard_blowup_polytope(3, &r(2, 1)).unwrap();
        let inner = p.facet_triangulate(3).unwrap();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].dim(), 2);
        // Coordinate facets are trapezoids: two triangles.
        assert_eq!(p.facet_triangulate(0).unwrap().len(), 2);
    }
}
