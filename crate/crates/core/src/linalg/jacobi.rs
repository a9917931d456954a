//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real rotation that annihilates it.
//! Sweeps stop once the off-diagonal Frobenius norm drops to
//! `1e-12 · ‖A‖_F`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues (unsorted) and the unitary whose columns are the eigenvectors,
/// row-major `dim × dim`.
#[derive(Debug, Clone)]
pub struct JacobiResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
    pub sweeps: usize,
}

impl JacobiResult {
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        let m = self.values.len();
        (0..m).map(|i| self.vectors[i * m + j]).collect()
    }
}

fn off_diagonal_norm(a: &[Complex64], m: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                s += a[i * m + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn jacobi_hermitian(m: usize, input: &[Complex64]) -> Result<JacobiResult> {
    assert_eq!(input.len(), m * m);
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            a[i * m + j] = (input[i * m + j] + input[j * m + i].conj()) * 0.5;
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        v[i * m + i] = Complex64::new(1.0, 0.0);
    }
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut sweeps = 0;
    if norm > 0.0 {
        loop {
            if off_diagonal_norm(&a, m) <= OFF_DIAGONAL_TOL * norm {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence(MAX_SWEEPS));
            }
            sweeps += 1;
            for p in 0..m {
                for q in (p + 1)..m {
                    rotate(&mut a, &mut v, m, p, q, norm);
                }
            }
        }
    }
    Ok(JacobiResult {
        values: (0..m).map(|i| a[i * m + i].re).collect(),
        vectors: v,
        sweeps,
    })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], m: usize, p: usize, q: usize, norm: f64) {
    let g = a[p * m + q];
    let ag = g.norm();
    if ag <= 1e-20 * norm {
        return;
    }
    let phase_conj = (g / ag).conj();
    let app = a[p * m + p].re;
    let aqq = a[q * m + q].re;
    let theta = (aqq - app) / (2.0 * ag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase_conj * (-s);
    let jqq = phase_conj * c;

    for k in 0..m {
        let akp = a[k * m + p];
        let akq = a[k * m + q];
        a[k * m + p] = akp * jpp + akq * jqp;
        a[k * m + q] = akp * jpq + akq * jqq;
    }
    for k in 0..m {
        let apk = a[p * m + k];
        let aqk = a[q * m + k];
        a[p * m + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * m + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * m + q] = Complex64::new(0.0, 0.0);
    a[q * m + p] = Complex64::new(0.0, 0.0);
    a[p * m + p] = Complex64::new(a[p * m + p].re, 0.0);
    a[q * m + q] = Complex64::new(a[q * m + q].re, 0.0);

    for k in 0..m {
        let vkp = v[k * m + p];
        let vkq = v[k * m + q];
        v[k * m + p] = vkp * jpp + vkq * jqp;
        v[k * m + q] = vkp * jpq + vkq * jqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(r: &JacobiResult) -> Vec<Complex64> {
        let m = r.values.len();
        let mut out = vec![c(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    out[i * m + j] += r.vectors[i * m + l] * r.values[l] * r.vectors[j * m + l].conj();
                }
            }
        }
        out
    }

    #[test]
    fn two_by_two_complex() {
        let a = vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let r = jacobi_hermitian(2, &a).unwrap();
        let mut vals = r.values.clone();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 0.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_a_dense_hermitian_matrix() {
        let a = vec![
            c(2.0, 0.0),
            c(1.0, 0.5),
            c(-0.3, 0.2),
            c(1.0, -0.5),
            c(0.5, 0.0),
            c(0.0, 1.0),
            c(-0.3, -0.2),
            c(0.0, -1.0),
            c(-1.0, 0.0),
        ];
        let r = jacobi_hermitian(3, &a).unwrap();
        let back = reconstruct(&r);
        for (x, y) in back.iter().zip(&a) {
            assert!((x - y).norm() < 1e-12);
        }
        // trace is preserved
        let tr: f64 = r.values.iter().sum();
        assert!((tr - 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let r = jacobi_hermitian(3, &[c(0.0, 0.0); 9]).unwrap();
        assert_eq!(r.sweeps, 0);
        assert!(r.values.iter().all(|v| *v == 0.0));
    }
}
