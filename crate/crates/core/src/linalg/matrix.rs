//! Dense square matrices with entries in ℝ, ℂ or ℍ.
//!
//! Every entry is stored as a [`Quaternion`]; the [`Ring`] tag records which
//! subring the entries are confined to. Real and complex matrices are closed
//! under the operations here, so the tag of a result is the join of the
//! operand tags.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Real,
    Complex,
    Quaternion,
}

impl Ring {
    /// Real components per entry.
    pub fn components(self) -> usize {
        match self {
            Ring::Real => 1,
            Ring::Complex => 2,
            Ring::Quaternion => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ring::Real => "real",
            Ring::Complex => "complex",
            Ring::Quaternion => "quaternion",
        }
    }

    pub fn join(self, other: Ring) -> Ring {
        self.max(other)
    }

    /// Whether `q` lies in this subring up to `tol` in the max norm.
    pub fn contains(self, q: Quaternion, tol: f64) -> bool {
        match self {
            Ring::Real => q.i.abs() <= tol && q.j.abs() <= tol && q.k.abs() <= tol,
            Ring::Complex => q.j.abs() <= tol && q.k.abs() <= tol,
            Ring::Quaternion => true,
        }
    }

    /// Drop the components outside this subring.
    pub fn project(self, q: Quaternion) -> Quaternion {
        match self {
            Ring::Real => Quaternion::real(q.re),
            Ring::Complex => Quaternion::complex(q.re, q.i),
            Ring::Quaternion => q,
        }
    }

    /// Real dimension of the space of n×n Hermitian matrices over this ring.
    pub fn hermitian_dimension(self, n: usize) -> usize {
        let off = n * (n.saturating_sub(1)) / 2;
        n + off * self.components()
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A column vector over a ring.
pub type QVector = Vec<Quaternion>;

/// `Σ conj(p_i)·q_i`.
pub fn inner(p: &[Quaternion], q: &[Quaternion]) -> Quaternion {
    p.iter()
        .zip(q)
        .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

pub fn vector_norm(p: &[Quaternion]) -> f64 {
    p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Greedy quaternionic Gram–Schmidt: repeatedly takes the remaining vector
/// with the largest residual, until `want` orthonormal vectors are found or
/// the residuals fall below `tol`.
pub fn orthonormalize(vectors: &[QVector], want: usize, tol: f64) -> Vec<QVector> {
    let mut residuals: Vec<QVector> = vectors.to_vec();
    let mut basis: Vec<QVector> = Vec::new();
    while basis.len() < want {
        let Some((idx, norm)) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, vector_norm(r)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm <= tol {
            break;
        }
        let mut e: QVector = residuals.swap_remove(idx).iter().map(|q| q.scale(1.0 / norm)).collect();
        // one re-orthogonalization pass against the accepted basis
        for b in &basis {
            let c = inner(b, &e);
            for (x, y) in e.iter_mut().zip(b) {
                *x = *x - *y * c;
            }
        }
        let n2 = vector_norm(&e);
        e.iter_mut().for_each(|x| *x = x.scale(1.0 / n2));
        for r in residuals.iter_mut() {
            let c = inner(&e, r);
            for (x, y) in r.iter_mut().zip(&e) {
                *x = *x - *y * c;
            }
        }
        basis.push(e);
    }
    basis
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    ring: Ring,
    n: usize,
    data: Vec<Quaternion>,
}

impl Matrix {
    pub fn zeros(ring: Ring, n: usize) -> Self {
        Matrix {
            ring,
            n,
            data: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n);
        for i in 0..n {
            m.data[i * n + i] = Quaternion::ONE;
        }
        m
    }

    pub fn diagonal(ring: Ring, diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(ring, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Quaternion::real(d);
        }
        m
    }

    /// Row-major entries; every entry must lie in `ring` (max-norm tolerance `1e-12`).
    pub fn from_entries(ring: Ring, n: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        if data.iter().any(|q| !ring.contains(*q, 1e-12)) {
            return Err(Error::RingViolation(ring.name()));
        }
        let data = data.into_iter().map(|q| ring.project(q)).collect();
        Ok(Matrix { ring, n, data })
    }

    pub fn from_fn(ring: Ring, n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(ring.project(f(i, j)));
            }
        }
        Matrix { ring, n, data }
    }

    /// Rows given as real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Matrix::from_fn(Ring::Real, n, |i, j| Quaternion::real(rows[i][j]))
    }

    /// `u·v*`.
    pub fn outer(ring: Ring, u: &[Quaternion], v: &[Quaternion]) -> Self {
        let n = u.len();
        Matrix::from_fn(ring, n, |i, j| u[i] * v[j].conj())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.data[i * self.n + j] = self.ring.project(q);
    }

    /// Same entries, reinterpreted in a (larger) ring.
    pub fn with_ring(&self, ring: Ring) -> Self {
        Matrix::from_fn(ring, self.n, |i, j| self.get(i, j))
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix {
            ring: self.ring,
            n: self.n,
            data: self.data.iter().map(|q| q.scale(s)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.ring, self.n, |i, j| self.get(j, i).conj())
    }

    /// `½(M + M*)`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale(0.5)
    }

    /// Real part of the sum of the diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    /// Max-norm distance from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).max_abs());
            }
        }
        worst
    }

    pub fn mul_vec(&self, v: &[Quaternion]) -> QVector {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Quaternion::ZERO, |acc, j| acc + self.get(i, j) * v[j])
            })
            .collect()
    }

    /// Row-major real coordinates, `ring.components()` per entry.
    pub fn coords(&self) -> Vec<f64> {
        let c = self.ring.components();
        let mut out = Vec::with_capacity(self.data.len() * c);
        for q in &self.data {
            out.extend_from_slice(&q.components()[..c]);
        }
        out
    }

    pub fn from_coords(ring: Ring, n: usize, coords: &[f64]) -> Result<Self> {
        let c = ring.components();
        if coords.len() != n * n * c {
            return Err(Error::DimensionMismatch {
                expected: n * n * c,
                got: coords.len(),
            });
        }
        let data = coords
            .chunks(c)
            .map(|ch| {
                let mut comp = [0.0; 4];
                comp[..c].copy_from_slice(ch);
                Quaternion::from_components(comp)
            })
            .collect();
        Ok(Matrix { ring, n, data })
    }

    /// Complex matrix carrying the same spectrum: the matrix itself for ℝ and ℂ,
    /// the 2n×2n block embedding for ℍ. Returns `(dimension, row-major entries)`.
    pub fn complex_representation(&self) -> (usize, Vec<Complex64>) {
        match self.ring {
            Ring::Real | Ring::Complex => (
                self.n,
                self.data.iter().map(|q| Complex64::new(q.re, q.i)).collect(),
            ),
            Ring::Quaternion => {
                let m = 2 * self.n;
                let mut out = vec![Complex64::new(0.0, 0.0); m * m];
                for i in 0..self.n {
                    for j in 0..self.n {
                        let b = self.get(i, j).complex_block();
                        out[(2 * i) * m + 2 * j] = b[0];
                        out[(2 * i) * m + 2 * j + 1] = b[1];
                        out[(2 * i + 1) * m + 2 * j] = b[2];
                        out[(2 * i + 1) * m + 2 * j + 1] = b[3];
                    }
                }
                (m, out)
            }
        }
    }

    /// Componentwise max-norm distance.
    pub fn distance(&self, other: &Matrix) -> f64 {
        (self - other).max_abs()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        Matrix {
            ring: self.ring.join(o.ring),
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        Matrix {
            ring: self.ring.join(o.ring),
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let n = self.n;
        let mut data = vec![Quaternion::ZERO; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.data[l * n + j];
                }
            }
        }
        Matrix {
            ring: self.ring.join(o.ring),
            n,
            data,
        }
    }
}
