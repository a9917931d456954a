//! Hermitian matrices over ℝ, ℂ and ℍ with the Jordan product `x∘y = ½(xy + yx)`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::{matrix_from_rows, matrix_rows, EntryRepr};
use crate::linalg::{Matrix, Ring};

/// Asymmetry accepted from callers, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    /// Validates `M = M*` to `1e-12` (relative to the largest entry) and
    /// removes the residual asymmetry.
    pub fn new(m: Matrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(HermitianMatrix(m.hermitian_part()))
    }

    /// For matrices Hermitian by construction up to rounding.
    pub(crate) fn from_computed(m: Matrix) -> Self {
        HermitianMatrix(m.hermitian_part())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        HermitianMatrix::new(Matrix::from_real_rows(rows))
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        HermitianMatrix(Matrix::identity(ring, n))
    }

    pub fn zeros(ring: Ring, n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(ring, n))
    }

    pub fn diagonal(ring: Ring, diag: &[f64]) -> Self {
        HermitianMatrix(Matrix::diagonal(ring, diag))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn ring(&self) -> Ring {
        self.0.ring()
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// `Tr(M)`: the real part of the diagonal sum.
    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        self.0.distance(&other.0)
    }

    /// `Tr(self · other)`, which is real for Hermitian pairs.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        (&self.0 * &other.0).trace()
    }

    pub fn jordan_product(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        jordan_product(self, other)
    }
}

/// `x∘y = ½(xy + yx)`.
pub fn jordan_product(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            got: y.n(),
        });
    }
    let xy = &x.0 * &y.0;
    let yx = &y.0 * &x.0;
    Ok(HermitianMatrix::from_computed((&xy + &yx).scale(0.5)))
}

/// `Tr(M)` for any square matrix over the three rings.
pub fn trace(m: &Matrix) -> f64 {
    m.trace()
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_rows(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<EntryRepr>>::deserialize(d)?;
        let m = matrix_from_rows(&rows, None).map_err(serde::de::Error::custom)?;
        HermitianMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Quaternion;
    use crate::sampling::{random_hermitian, trial_rng};

    #[test]
    fn identity_is_the_jordan_unit() {
        let mut rng = trial_rng(3, 0);
        let x = HermitianMatrix::from_computed(random_hermitian(&mut rng, Ring::Quaternion, 3));
        let e = HermitianMatrix::identity(Ring::Quaternion, 3);
        assert!(x.jordan_product(&e).unwrap().distance(&x) < 1e-14);
    }

    #[test]
    fn square_matches_ordinary_square() {
        let mut rng = trial_rng(3, 1);
        let x = HermitianMatrix::from_computed(random_hermitian(&mut rng, Ring::Complex, 3));
        let sq = HermitianMatrix::from_computed(x.matrix() * x.matrix());
        assert!(x.jordan_product(&x).unwrap().distance(&sq) < 1e-14);
    }

    #[test]
    fn jordan_identity_holds_for_quaternionic_matrices() {
        for trial in 0..20 {
            let mut rng = trial_rng(11, trial);
            let x = HermitianMatrix::from_computed(random_hermitian(&mut rng, Ring::Quaternion, 3));
            let y = HermitianMatrix::from_computed(random_hermitian(&mut rng, Ring::Quaternion, 3));
            let xx = x.jordan_product(&x).unwrap();
            let lhs = x.jordan_product(&y).unwrap().jordan_product(&xx).unwrap();
            let rhs = x.jordan_product(&y.jordan_product(&xx).unwrap()).unwrap();
            assert!(lhs.distance(&rhs) < 1e-10, "trial {trial}");
        }
    }

    #[test]
    fn trace_is_cyclic_over_quaternions() {
        for trial in 0..20 {
            let mut rng = trial_rng(12, trial);
            let m = Matrix::from_fn(Ring::Quaternion, 3, |_, _| {
                crate::sampling::gaussian_entry(&mut rng, Ring::Quaternion)
            });
            let n = Matrix::from_fn(Ring::Quaternion, 3, |_, _| {
                crate::sampling::gaussian_entry(&mut rng, Ring::Quaternion)
            });
            assert!((trace(&(&m * &n)) - trace(&(&n * &m))).abs() < 1e-10);
        }
    }

    #[test]
    fn traces_of_simple_matrices() {
        assert_eq!(HermitianMatrix::identity(Ring::Quaternion, 4).trace(), 4.0);
        let d = HermitianMatrix::diagonal(Ring::Complex, &[0.75, 0.25]);
        assert!((d.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = Matrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
        let q = Matrix::from_fn(Ring::Quaternion, 2, |i, j| {
            if i == j {
                Quaternion::new(1.0, 0.5, 0.0, 0.0)
            } else {
                Quaternion::ZERO
            }
        });
        assert!(HermitianMatrix::new(q).is_err());
    }

    #[test]
    fn json_round_trip_keeps_quaternion_entries() {
        let m = Matrix::from_fn(Ring::Quaternion, 2, |i, j| match (i, j) {
            (0, 1) => Quaternion::new(0.0, 0.0, 1.0, 0.0),
            (1, 0) => Quaternion::new(0.0, 0.0, -1.0, 0.0),
            _ => Quaternion::ONE,
        });
        let h = HermitianMatrix::new(m).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, "[[[1.0,0.0,0.0,0.0],[0.0,0.0,1.0,0.0]],[[0.0,0.0,-1.0,0.0],[1.0,0.0,0.0,0.0]]]");
        let back: HermitianMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }
}
