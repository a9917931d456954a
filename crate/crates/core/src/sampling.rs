//! Seeded random sampling of vectors, unitaries and states.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, trial)`, so
//! results do not depend on the order in which trials run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{orthonormalize, Matrix, QVector, Quaternion, Ring};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_entry<R: Rng + ?Sized>(rng: &mut R, ring: Ring) -> Quaternion {
    let mut c = [0.0; 4];
    for x in c.iter_mut().take(ring.components()) {
        *x = gaussian(rng);
    }
    Quaternion::from_components(c)
}

/// Uniform point of the probability simplex (flat Dirichlet).
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Orthonormal basis of ring^n drawn from Gaussian columns (Haar for the
/// unitary group of the ring).
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: usize) -> Vec<QVector> {
    loop {
        let cols: Vec<QVector> = (0..n)
            .map(|_| (0..n).map(|_| gaussian_entry(rng, ring)).collect())
            .collect();
        let basis = orthonormalize(&cols, n, 1e-8);
        if basis.len() == n {
            return basis.into_iter().map(|v| v.into_iter().map(|q| ring.project(q)).collect()).collect();
        }
    }
}

/// `Σ w_i·u_i u_i*` for orthonormal `u_i`.
pub fn spectral_matrix(ring: Ring, basis: &[QVector], weights: &[f64]) -> Matrix {
    let n = basis[0].len();
    let mut m = Matrix::zeros(ring, n);
    for (u, &w) in basis.iter().zip(weights) {
        if w != 0.0 {
            m = &m + &Matrix::outer(ring, u, u).scale(w);
        }
    }
    m.hermitian_part()
}

/// Random Hermitian matrix with iid Gaussian entries (GOE/GUE/GSE style).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: usize) -> Matrix {
    let g = Matrix::from_fn(ring, n, |_, _| gaussian_entry(rng, ring));
    g.hermitian_part()
}

/// A random unit vector in ℝ^d.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// A uniform point of the closed unit ball in ℝ^d.
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let u = unit_vector(rng, d);
    let r: f64 = rng.random::<f64>().powf(1.0 / d as f64);
    u.into_iter().map(|x| x * r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(7, 3).random();
        let b: f64 = trial_rng(7, 3).random();
        let c: f64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_bases_are_orthonormal() {
        let mut rng = trial_rng(1, 0);
        for ring in [Ring::Real, Ring::Complex, Ring::Quaternion] {
            let b = random_basis(&mut rng, ring, 4);
            for i in 0..4 {
                for j in 0..4 {
                    let ip = inner(&b[i], &b[j]);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - Quaternion::real(expect)).max_abs() < 1e-12);
                }
                assert!(b[i].iter().all(|q| ring.contains(*q, 0.0)));
            }
        }
    }

    #[test]
    fn probability_vectors_are_normalized() {
        let mut rng = trial_rng(2, 0);
        let p = probability_vector(&mut rng, 5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|x| *x >= 0.0));
    }
}
