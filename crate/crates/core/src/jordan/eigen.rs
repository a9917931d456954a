//! Spectral decomposition `A = Σ t_ℓ E_ℓ` with clustered eigenvalues.
//!
//! Real and complex matrices go straight to the Jacobi solver. A quaternionic
//! matrix is replaced by its 2n×2n complex embedding, whose eigenvalues come in
//! pairs; each complex eigenvector is pulled back to a quaternionic one and
//! every eigenspace is re-orthonormalized over ℍ.

use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use crate::error::Result;
use crate::linalg::jacobi::jacobi_hermitian;
use crate::linalg::{orthonormalize, Matrix, QVector, Quaternion, Ring};

/// Eigenvalues closer than this fraction of the spectral radius are merged.
pub const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Distinct eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub idempotents: Vec<HermitianMatrix>,
    /// Orthonormal basis of each eigenspace.
    pub eigenvectors: Vec<Vec<QVector>>,
}

impl EigenDecomposition {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    /// Eigenvalues repeated by multiplicity, descending.
    pub fn all_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(t, &m)| std::iter::repeat_n(*t, m))
            .collect()
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        let first = &self.idempotents[0];
        let mut acc = HermitianMatrix::zeros(first.ring(), first.n());
        for (t, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            acc = acc.add(&e.scale(*t));
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

fn pull_back(ring: Ring, u: &[Complex64]) -> QVector {
    match ring {
        Ring::Real => u.iter().map(|z| Quaternion::real(z.re)).collect(),
        Ring::Complex => u.iter().map(|z| Quaternion::complex(z.re, z.im)).collect(),
        Ring::Quaternion => u
            .chunks(2)
            .map(|p| Quaternion::new(p[0].re, p[0].im, -p[1].re, p[1].im))
            .collect(),
    }
}

pub fn eigen_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let ring = a.ring();
    let n = a.n();
    let (dim, entries) = a.matrix().complex_representation();
    let jac = jacobi_hermitian(dim, &entries)?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| jac.values[j].total_cmp(&jac.values[i]));
    let radius = jac.values.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let gap = CLUSTER_TOL * radius;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if jac.values[*c.last().unwrap()] - jac.values[i] <= gap => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut out = EigenDecomposition {
        eigenvalues: Vec::new(),
        multiplicities: Vec::new(),
        idempotents: Vec::new(),
        eigenvectors: Vec::new(),
    };
    for members in clusters {
        let mean = members.iter().map(|&i| jac.values[i]).sum::<f64>() / members.len() as f64;
        let mult = match ring {
            Ring::Quaternion => members.len().div_ceil(2),
            _ => members.len(),
        };
        let candidates: Vec<QVector> = members
            .iter()
            .map(|&i| pull_back(ring, &jac.column(i)))
            .collect();
        let basis = orthonormalize(&candidates, mult, 1e-6);
        let mut e = Matrix::zeros(ring, n);
        for v in &basis {
            e = &e + &Matrix::outer(ring, v, v);
        }
        out.eigenvalues.push(mean);
        out.multiplicities.push(basis.len());
        out.idempotents.push(HermitianMatrix::from_computed(e));
        out.eigenvectors.push(basis);
    }
    Ok(out)
}
