//! Polytopes given by their vertices.
//!
//! An affine test on a face is described by its values `y_v ∈ [0, 1]` at the
//! face's vertices, subject to every affine dependency among those vertices.
//! Two states are mutually singular in the face iff some admissible `y`
//! vanishes on the vertices of the first state's face and equals 1 on those
//! of the second. The smallest face of a point is the set of vertices that
//! carry positive weight in some convex representation of it, obtained as the
//! union of supports of the basic representations.

use std::sync::OnceLock;

use crate::cone::AffineFunctional;
use crate::error::{Error, Result};
use crate::linalg::feasibility::{dependencies, max_distance, rank, BoxedSystem, Lu};

/// Feasibility tolerance for the small linear systems.
pub const LP_TOL: f64 = 1e-9;
/// Largest vertex count for which cliques and decompositions are enumerated.
pub const MAX_ENUMERATED_VERTICES: usize = 12;

/// A set of vertex indices.
pub type VertexSet = u32;

pub fn members(set: VertexSet) -> Vec<usize> {
    (0..32).filter(|i| set & (1 << i) != 0).collect()
}

fn set_of(indices: &[usize]) -> VertexSet {
    indices.iter().fold(0, |s, i| s | (1 << i))
}

#[derive(Debug, Clone)]
struct OrthogonalityGraph {
    adjacency: Vec<VertexSet>,
    /// `witnesses[i][j]` vanishes at vertex `i` and equals 1 at vertex `j`.
    witnesses: Vec<Vec<Option<AffineFunctional>>>,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<Vec<f64>>,
    affine_dim: usize,
    graph: OnceLock<OrthogonalityGraph>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Polytope {
    /// Validates that the points are finite, of one dimension, and that each
    /// is an extreme point of their convex hull.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSpace("polytope needs at least one vertex".into()));
        }
        if vertices.len() > 32 {
            return Err(Error::TooManyVertices(vertices.len()));
        }
        let m = vertices[0].len();
        if m == 0 || vertices.iter().any(|v| v.len() != m) {
            return Err(Error::InvalidSpace("vertices must share a positive dimension".into()));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpace("vertex coordinates must be finite".into()));
        }
        for i in 0..vertices.len() {
            for j in 0..i {
                if max_distance(&vertices[i], &vertices[j]) <= LP_TOL {
                    return Err(Error::InvalidSpace(format!("vertices {j} and {i} coincide")));
                }
            }
        }
        for i in 0..vertices.len() {
            let others: Vec<Vec<f64>> = vertices
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if !others.is_empty() && hull_system(&others, &vertices[i]).is_feasible(LP_TOL) {
                return Err(Error::InvalidSpace(format!(
                    "vertex {i} is a convex combination of the others"
                )));
            }
        }
        let diffs: Vec<Vec<f64>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
            .collect();
        let affine_dim = rank(&diffs, LP_TOL);
        Ok(Polytope {
            vertices,
            affine_dim,
            graph: OnceLock::new(),
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn full_set(&self) -> VertexSet {
        set_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn vertex_mean(&self) -> Vec<f64> {
        self.combine(&vec![1.0 / self.len() as f64; self.len()])
    }

    /// `Σ w_v · v`.
    pub fn combine(&self, weights: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim()];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        x
    }

    pub fn nearest_vertex(&self, x: &[f64]) -> (usize, f64) {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, max_distance(v, x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("polytope has vertices")
    }

    /// Orthonormal basis of the span of `v − v₀`.
    pub fn direction_basis(&self) -> Vec<Vec<f64>> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in &self.vertices[1..] {
            let mut r: Vec<f64> = v.iter().zip(&self.vertices[0]).map(|(a, b)| a - b).collect();
            for _ in 0..2 {
                for b in &basis {
                    let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                    r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > LP_TOL {
                basis.push(r.into_iter().map(|x| x / norm).collect());
            }
        }
        basis
    }

    /// Basic convex representations `x = Σ w_v v`, `w ≥ 0`, restricted to the
    /// vertices in `subset`; returned as full-length weight vectors.
    pub fn representations(&self, x: &[f64], subset: &[usize], limit: Option<usize>) -> Vec<Vec<f64>> {
        let verts: Vec<Vec<f64>> = subset.iter().map(|&i| self.vertices[i].clone()).collect();
        hull_system(&verts, x)
            .vertices(LP_TOL, limit)
            .into_iter()
            .map(|w| {
                let mut full = vec![0.0; self.len()];
                for (k, &i) in subset.iter().enumerate() {
                    full[i] = w[k];
                }
                full
            })
            .collect()
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        let system = hull_system(&self.vertices, x);
        if system.is_feasible(LP_TOL) {
            return 0.0;
        }
        // smallest decade of slack that admits a representation
        let mut tol = LP_TOL * 10.0;
        while tol < 1e6 {
            if system.is_feasible(tol) {
                return tol;
            }
            tol *= 10.0;
        }
        f64::INFINITY
    }

    /// Vertex set of the smallest face containing `x`.
    pub fn face_of(&self, x: &[f64]) -> VertexSet {
        let all: Vec<usize> = (0..self.len()).collect();
        self.representations(x, &all, None)
            .iter()
            .flat_map(|w| w.iter().enumerate().filter(|(_, wi)| **wi > LP_TOL).map(|(i, _)| i))
            .fold(0, |s, i| s | (1 << i))
    }

    /// Vertex values of a test on `face` that vanishes on `zero` and equals 1
    /// on `one`: the centroid of all basic admissible value vectors.
    fn separating_values(&self, face: VertexSet, zero: VertexSet, one: VertexSet) -> Option<Vec<f64>> {
        if zero & one != 0 || zero & !face != 0 || one & !face != 0 {
            return None;
        }
        let idx = members(face);
        let lifted: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| {
                let mut v = self.vertices[i].clone();
                v.push(1.0);
                v
            })
            .collect();
        let mut system = BoxedSystem::new(idx.len());
        for dep in dependencies(&lifted, LP_TOL) {
            system.add_row(dep, 0.0);
        }
        for (k, &i) in idx.iter().enumerate() {
            let bit = 1 << i;
            if zero & bit != 0 {
                system.bound(k, 0.0, 0.0);
            } else if one & bit != 0 {
                system.bound(k, 1.0, 1.0);
            } else {
                system.bound(k, 0.0, 1.0);
            }
        }
        let solutions = system.vertices(LP_TOL, None);
        if solutions.is_empty() {
            return None;
        }
        let mut centroid = vec![0.0; idx.len()];
        for s in &solutions {
            for (c, v) in centroid.iter_mut().zip(s) {
                *c += v / solutions.len() as f64;
            }
        }
        Some(centroid)
    }

    /// The affine functional on the ambient space taking the values `y` at
    /// the vertices of `face` (minimum-norm fit over an affine basis).
    fn functional_from_values(&self, face: VertexSet, y: &[f64]) -> AffineFunctional {
        let idx = members(face);
        let m = self.ambient_dim();
        let mut chosen: Vec<usize> = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (k, &i) in idx.iter().enumerate() {
            let mut row = self.vertices[i].clone();
            row.push(1.0);
            rows.push(row);
            if rank(&rows, LP_TOL) == rows.len() {
                chosen.push(k);
            } else {
                rows.pop();
            }
        }
        // z = Rᵀ (R Rᵀ)⁻¹ y on the chosen rows
        let gram: Vec<Vec<f64>> = rows
            .iter()
            .map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(p, q)| p * q).sum()).collect())
            .collect();
        let rhs: Vec<f64> = chosen.iter().map(|&k| y[k]).collect();
        let alpha = Lu::factor(gram).expect("affinely independent rows").solve(&rhs);
        let mut z = vec![0.0; m + 1];
        for (a, row) in alpha.iter().zip(&rows) {
            for (zi, ri) in z.iter_mut().zip(row) {
                *zi += a * ri;
            }
        }
        let offset = z.pop().expect("offset slot");
        AffineFunctional::new(z, offset)
    }

    /// A test on `face` separating `zero` (value 0) from `one` (value 1).
    pub fn separating_test(&self, face: VertexSet, zero: VertexSet, one: VertexSet) -> Option<AffineFunctional> {
        self.separating_values(face, zero, one)
            .map(|y| self.functional_from_values(face, &y))
    }

    pub fn mutually_singular(&self, x0: &[f64], x1: &[f64]) -> Option<AffineFunctional> {
        self.separating_test(self.full_set(), self.face_of(x0), self.face_of(x1))
    }

    pub fn orthogonal(&self, x0: &[f64], x1: &[f64]) -> Option<AffineFunctional> {
        let mid: Vec<f64> = x0.iter().zip(x1).map(|(a, b)| 0.5 * (a + b)).collect();
        self.separating_test(self.face_of(&mid), self.face_of(x0), self.face_of(x1))
    }

    fn graph(&self) -> &OrthogonalityGraph {
        self.graph.get_or_init(|| {
            let n = self.len();
            let mut adjacency = vec![0; n];
            let mut witnesses = vec![vec![None; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let mid: Vec<f64> = self.vertices[i]
                        .iter()
                        .zip(&self.vertices[j])
                        .map(|(a, b)| 0.5 * (a + b))
                        .collect();
                    let face = self.face_of(&mid);
                    if let Some(y) = self.separating_values(face, 1 << i, 1 << j) {
                        let phi = self.functional_from_values(face, &y);
                        let flipped = AffineFunctional::new(phi.linear.iter().map(|c| -c).collect(), 1.0 - phi.offset);
                        adjacency[i] |= 1 << j;
                        adjacency[j] |= 1 << i;
                        witnesses[i][j] = Some(phi);
                        witnesses[j][i] = Some(flipped);
                    }
                }
            }
            OrthogonalityGraph { adjacency, witnesses }
        })
    }

    pub fn vertices_orthogonal(&self, i: usize, j: usize) -> bool {
        self.graph().adjacency[i] & (1 << j) != 0
    }

    /// Test vanishing at vertex `i` and equal to 1 at vertex `j`, if they are
    /// orthogonal.
    pub fn vertex_witness(&self, i: usize, j: usize) -> Option<&AffineFunctional> {
        self.graph().witnesses[i][j].as_ref()
    }

    pub fn ensure_enumerable(&self) -> Result<()> {
        if self.len() > MAX_ENUMERATED_VERTICES {
            Err(Error::TooManyVertices(self.len()))
        } else {
            Ok(())
        }
    }

    /// Cliques of the orthogonality graph with at most `max_size` vertices,
    /// as sorted index lists in lexicographic order.
    pub fn cliques(&self, max_size: usize) -> Vec<Vec<usize>> {
        let adjacency = &self.graph().adjacency;
        let mut out = Vec::new();
        fn extend(
            adjacency: &[VertexSet],
            current: &mut Vec<usize>,
            candidates: VertexSet,
            max_size: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            for v in members(candidates) {
                current.push(v);
                out.push(current.clone());
                if current.len() < max_size {
                    let next = candidates & adjacency[v] & !((2u32 << v) - 1);
                    extend(adjacency, current, next, max_size, out);
                }
                current.pop();
            }
        }
        if max_size > 0 {
            extend(adjacency, &mut Vec::new(), self.full_set(), max_size, &mut out);
        }
        out
    }

    /// Size of the largest clique of the orthogonality graph.
    pub fn max_clique(&self) -> usize {
        self.cliques(self.len()).iter().map(|c| c.len()).max().unwrap_or(0)
    }
}

/// `x = Σ w_k v_k`, `Σ w_k = 1`, `w ≥ 0`.
fn hull_system(vertices: &[Vec<f64>], x: &[f64]) -> BoxedSystem {
    let mut s = BoxedSystem::new(vertices.len());
    for (c, xc) in x.iter().enumerate() {
        s.add_row(vertices.iter().map(|v| v[c]).collect(), *xc);
    }
    s.add_row(vec![1.0; vertices.len()], 1.0);
    for k in 0..vertices.len() {
        s.bound(k, 0.0, f64::INFINITY);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polytope {
        Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Polytope::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]]).is_err());
        assert!(Polytope::new(vec![vec![0.0], vec![0.0]]).is_err());
        assert!(Polytope::new(vec![]).is_err());
        let seg = Polytope::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(square().affine_dim(), 2);
    }

    #[test]
    fn faces_of_the_square() {
        let sq = square();
        assert_eq!(sq.face_of(&[0.5, 0.0]), 0b0011);
        assert_eq!(sq.face_of(&[0.5, 0.5]), 0b1111);
        assert_eq!(sq.face_of(&[1.0, 1.0]), 0b1000);
        assert_eq!(sq.face_of(&[0.3, 0.6]), 0b1111);
    }

    #[test]
    fn diagonal_corners_are_mutually_singular() {
        let sq = square();
        let phi = sq.mutually_singular(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(max_distance(&phi.linear, &[0.5, 0.5]) < 1e-12 && phi.offset.abs() < 1e-12);
        assert!(sq.mutually_singular(&[0.5, 0.5], &[1.0, 1.0]).is_none());
        assert!(sq.mutually_singular(&[0.0, 0.0], &[0.0, 0.0]).is_none());
    }

    #[test]
    fn adjacent_and_opposite_vertices_are_orthogonal() {
        let sq = square();
        let phi = sq.orthogonal(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(max_distance(&phi.linear, &[-0.5, 0.5]) < 1e-12 && (phi.offset - 0.5).abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(sq.vertices_orthogonal(i, j), i != j);
                if let Some(w) = sq.vertex_witness(i, j) {
                    assert!(w.value_at(&sq.vertices()[i]).abs() < 1e-12);
                    assert!((w.value_at(&sq.vertices()[j]) - 1.0).abs() < 1e-12);
                }
            }
        }
        // the bottom edge against the opposite corner: φ(x, y) = y
        let phi = sq.orthogonal(&[0.5, 0.0], &[1.0, 1.0]).unwrap();
        assert!(max_distance(&phi.linear, &[0.0, 1.0]) < 1e-12 && phi.offset.abs() < 1e-12);
        assert!(sq.orthogonal(&[0.5, 0.0], &[0.5, 0.5]).is_none());
    }

    #[test]
    fn pentagon_vertices_are_pairwise_orthogonal() {
        // each vertex faces the opposite edge across a pair of parallel
        // supporting lines, so every pair of vertices can be separated
        let pent: Vec<Vec<f64>> = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let p = Polytope::new(pent).unwrap();
        assert!(p.vertices_orthogonal(0, 1));
        assert!(p.vertices_orthogonal(0, 2));
        assert_eq!(p.max_clique(), 5);
    }

    #[test]
    fn cliques_of_the_square() {
        let sq = square();
        let c = sq.cliques(3);
        assert_eq!(c.len(), 4 + 6 + 4);
        assert_eq!(c[0], vec![0]);
        assert_eq!(c[1], vec![0, 1]);
        assert_eq!(c[2], vec![0, 1, 2]);
        assert_eq!(sq.max_clique(), 4);
    }
}
