//! The spin factor ℝ ⊕ ℝ^d with `(s,u)∘(t,v) = (st + u·v, sv + tu)`.
//!
//! Every element `(t, v)` has eigenvalues `t ± |v|` with idempotents
//! `½(1, ±v/|v|)`, so the algebra has rank 2 and its states form a ball.

use serde::{Deserialize, Serialize};

use super::eigen::CLUSTER_TOL;
use super::functions::ScalarFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinElement {
    pub scalar: f64,
    pub vector: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl SpinElement {
    pub fn new(scalar: f64, vector: Vec<f64>) -> Self {
        SpinElement { scalar, vector }
    }

    pub fn identity(d: usize) -> Self {
        SpinElement::new(1.0, vec![0.0; d])
    }

    pub fn zero(d: usize) -> Self {
        SpinElement::new(0.0, vec![0.0; d])
    }

    /// The state element `(½, x/2)` of a ball point `x`.
    pub fn from_ball_point(x: &[f64]) -> Self {
        SpinElement::new(0.5, x.iter().map(|c| 0.5 * c).collect())
    }

    pub fn d(&self) -> usize {
        self.vector.len()
    }

    pub fn vector_norm(&self) -> f64 {
        dot(&self.vector, &self.vector).sqrt()
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.scalar
    }

    /// `(t + |v|, t − |v|)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.vector_norm();
        (self.scalar + r, self.scalar - r)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.scalar >= self.vector_norm() - tol
    }

    /// Unit direction of the vector part; `e₁` for a scalar element.
    pub fn axis(&self) -> Vec<f64> {
        let r = self.vector_norm();
        if r > 0.0 {
            self.vector.iter().map(|x| x / r).collect()
        } else {
            let mut e = vec![0.0; self.d()];
            if let Some(first) = e.first_mut() {
                *first = 1.0;
            }
            e
        }
    }

    /// The idempotents `½(1, ±u)` belonging to `t ± |v|`.
    pub fn idempotents(&self) -> (SpinElement, SpinElement) {
        let u = self.axis();
        (
            SpinElement::new(0.5, u.iter().map(|x| 0.5 * x).collect()),
            SpinElement::new(0.5, u.iter().map(|x| -0.5 * x).collect()),
        )
    }

    pub fn add(&self, other: &SpinElement) -> SpinElement {
        SpinElement::new(
            self.scalar + other.scalar,
            self.vector.iter().zip(&other.vector).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn scale(&self, s: f64) -> SpinElement {
        SpinElement::new(self.scalar * s, self.vector.iter().map(|a| a * s).collect())
    }

    pub fn distance(&self, other: &SpinElement) -> f64 {
        self.vector
            .iter()
            .zip(&other.vector)
            .fold((self.scalar - other.scalar).abs(), |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn product(&self, other: &SpinElement) -> Result<SpinElement> {
        spin_product(self, other)
    }
}

pub fn spin_product(a: &SpinElement, b: &SpinElement) -> Result<SpinElement> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch {
            expected: a.d(),
            got: b.d(),
        });
    }
    Ok(SpinElement::new(
        a.scalar * b.scalar + dot(&a.vector, &b.vector),
        a.vector
            .iter()
            .zip(&b.vector)
            .map(|(u, v)| a.scalar * v + b.scalar * u)
            .collect(),
    ))
}

/// The trace form `Tr(x∘y) = 2(st + u·v)`.
pub fn spin_trace_form(a: &SpinElement, b: &SpinElement) -> f64 {
    2.0 * (a.scalar * b.scalar + dot(&a.vector, &b.vector))
}

pub fn spin_apply(f: &ScalarFunction, x: &SpinElement) -> Result<SpinElement> {
    let (hi, lo) = x.eigenvalues();
    let (p, m) = x.idempotents();
    Ok(p.scale(f.value(hi)?).add(&m.scale(f.value(lo)?)))
}

/// `Tr f(x) = f(t + |v|) + f(t − |v|)`.
pub fn spin_trace_function(f: &ScalarFunction, x: &SpinElement) -> Result<f64> {
    let (hi, lo) = x.eigenvalues();
    Ok(f.value(hi)? + f.value(lo)?)
}

pub fn spin_entropy(x: &SpinElement) -> Result<f64> {
    spin_trace_function(&ScalarFunction::neg_entropy(), x)
}

/// `d²/dt² Tr f(A + tB)` at 0 from the Peirce decomposition of `B` relative
/// to `A`: with `β± = s ± z∥` and `z⊥` the part of `B`'s vector orthogonal to
/// `A`'s axis, the value is `f″(λ₊)β₊² + f″(λ₋)β₋² + 2ã|z⊥|²`.
pub fn spin_second_trace_derivative(f: &ScalarFunction, a: &SpinElement, b: &SpinElement) -> Result<f64> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch {
            expected: a.d(),
            got: b.d(),
        });
    }
    let (hi, lo) = a.eigenvalues();
    let u = a.axis();
    let par = dot(&b.vector, &u);
    let perp2 = (dot(&b.vector, &b.vector) - par * par).max(0.0);
    let beta_p = b.scalar + par;
    let beta_m = b.scalar - par;
    let radius = hi.abs().max(lo.abs());
    let same = hi - lo <= CLUSTER_TOL * radius;
    let cross = f.derivative_divided_difference(hi, lo, same)?;
    Ok(f.d2(hi)? * beta_p * beta_p + f.d2(lo)? * beta_m * beta_m + 2.0 * cross * perp2)
}

/// Five-point stencil for `d²/dt² Tr f(A + tB)` at 0.
pub fn spin_finite_difference_second(f: &ScalarFunction, a: &SpinElement, b: &SpinElement, h: f64) -> Result<f64> {
    let g = |t: f64| spin_trace_function(f, &a.add(&b.scale(t)));
    Ok((-g(2.0 * h)? + 16.0 * g(h)? - 30.0 * g(0.0)? + 16.0 * g(-h)? - g(-2.0 * h)?) / (12.0 * h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{gaussian, trial_rng};
    use proptest::prelude::*;

    fn element(seed: u64, d: usize) -> SpinElement {
        let mut rng = trial_rng(seed, 0);
        SpinElement::new(gaussian(&mut rng), (0..d).map(|_| gaussian(&mut rng)).collect())
    }

    #[test]
    fn identity_and_vector_squares() {
        let a = element(1, 3);
        assert_eq!(spin_product(&a, &SpinElement::identity(3)).unwrap(), a);
        let u = SpinElement::new(0.0, vec![0.3, -1.2, 0.5]);
        let sq = spin_product(&u, &u).unwrap();
        assert!((sq.scalar - (0.09 + 1.44 + 0.25)).abs() < 1e-15);
        assert!(sq.vector.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn idempotents_are_orthogonal_projections() {
        let a = element(2, 4);
        let (p, m) = a.idempotents();
        assert!(spin_product(&p, &p).unwrap().distance(&p) < 1e-15);
        assert!(spin_product(&p, &m).unwrap().distance(&SpinElement::zero(4)) < 1e-15);
        let (hi, lo) = a.eigenvalues();
        assert!(p.scale(hi).add(&m.scale(lo)).distance(&a) < 1e-14);
        assert!((a.trace() - (hi + lo)).abs() < 1e-14);
    }

    #[test]
    fn entropy_of_ball_state_is_binary_entropy() {
        for r in [0.0, 0.3, 0.8, 1.0] {
            let x = SpinElement::from_ball_point(&[r * 0.6, 0.0, r * 0.8]);
            let p: f64 = (1.0 + r) / 2.0;
            let q: f64 = 1.0 - p;
            let h = -p * p.ln() - if q > 0.0 { q * q.ln() } else { 0.0 };
            assert!((spin_entropy(&x).unwrap() - h).abs() < 1e-14);
        }
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let f = ScalarFunction::neg_entropy();
        let a = SpinElement::new(0.5, vec![0.1, 0.2, -0.15]);
        let b = SpinElement::new(0.2, vec![-0.3, 0.4, 0.1]);
        let exact = spin_second_trace_derivative(&f, &a, &b).unwrap();
        let fd = spin_finite_difference_second(&f, &a, &b, 1e-3).unwrap();
        assert!(exact < 0.0);
        assert!((exact - fd).abs() <= 1e-6 * exact.abs());
        // scalar A: single cluster
        let a0 = SpinElement::new(0.5, vec![0.0; 3]);
        let exact0 = spin_second_trace_derivative(&f, &a0, &b).unwrap();
        assert!((exact0 - (-2.0) * spin_trace_form(&b, &b)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn jordan_identity_and_commutativity(s in any::<u64>(), t in any::<u64>(), d in 1usize..8) {
            let x = element(s, d);
            let y = element(t, d);
            let xy = spin_product(&x, &y).unwrap();
            prop_assert!(xy.distance(&spin_product(&y, &x).unwrap()) < 1e-14);
            let xx = spin_product(&x, &x).unwrap();
            let lhs = spin_product(&xy, &xx).unwrap();
            let rhs = spin_product(&x, &spin_product(&y, &xx).unwrap()).unwrap();
            let scale = 1.0 + lhs.scalar.abs() + lhs.vector.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(lhs.distance(&rhs) <= 1e-12 * scale);
        }

        #[test]
        fn trace_form_is_positive(s in any::<u64>(), d in 1usize..8) {
            let x = element(s, d);
            let sq = spin_product(&x, &x).unwrap();
            prop_assert!(sq.trace() > 0.0);
            prop_assert!((sq.trace() - 2.0 * (x.scalar * x.scalar + x.vector_norm().powi(2))).abs() < 1e-12 * sq.trace());
        }
    }
}
