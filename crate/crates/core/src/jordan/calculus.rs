//! Functional calculus and the divided-difference derivative formulas.
//!
//! With `A = Σ t_ℓ E_ℓ`, the derivative of `f(A + tB)` at `t = 0` is
//! `Σ a_mn E_m B E_n`, where `a_mn` is the divided difference of `f` on
//! `(t_m, t_n)` and `f′(t_m)` on the diagonal. Differentiating the trace once
//! more gives `Σ ã_mn Tr(E_m B E_n B)` with `ã` built from `f′`.

use super::eigen::{eigen_hermitian, EigenDecomposition};
use super::functions::ScalarFunction;
use super::hermitian::HermitianMatrix;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

fn same_shape(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(())
}

/// `Σ f(t_ℓ) E_ℓ`.
pub fn apply_function(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eigen_hermitian(a)?;
    apply_with(f, &eig)
}

pub fn apply_with(f: &ScalarFunction, eig: &EigenDecomposition) -> Result<HermitianMatrix> {
    let first = &eig.idempotents[0];
    let mut acc = HermitianMatrix::zeros(first.ring(), first.n());
    for (t, e) in eig.eigenvalues.iter().zip(&eig.idempotents) {
        acc = acc.add(&e.scale(f.value(*t)?));
    }
    Ok(acc)
}

/// `Tr f(A) = Σ mult_ℓ · f(t_ℓ)`.
pub fn trace_function(f: &ScalarFunction, a: &HermitianMatrix) -> Result<f64> {
    let eig = eigen_hermitian(a)?;
    eig.eigenvalues
        .iter()
        .zip(&eig.multiplicities)
        .map(|(t, &m)| f.value(*t).map(|v| v * m as f64))
        .sum()
}

/// von Neumann entropy `−Tr(ρ ln ρ)`.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    trace_function(&ScalarFunction::neg_entropy(), rho)
}

pub fn directional_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    same_shape(a, b)?;
    let eig = eigen_hermitian(a)?;
    let k = eig.len();
    let mut acc = Matrix::zeros(a.ring().join(b.ring()), a.n());
    for m in 0..k {
        let em_b = eig.idempotents[m].matrix() * b.matrix();
        for n in 0..k {
            let coeff = f.divided_difference(eig.eigenvalues[m], eig.eigenvalues[n], m == n)?;
            if coeff != 0.0 {
                acc = &acc + &(&em_b * eig.idempotents[n].matrix()).scale(coeff);
            }
        }
    }
    Ok(HermitianMatrix::from_computed(acc))
}

/// `d/dt Tr f(A + tB)` at 0, computed as `Tr(f′(A) B)`.
pub fn trace_derivative(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    same_shape(a, b)?;
    let eig = eigen_hermitian(a)?;
    let mut total = 0.0;
    for (t, e) in eig.eigenvalues.iter().zip(&eig.idempotents) {
        total += f.d1(*t)? * e.trace_product(b);
    }
    Ok(total)
}

/// `d²/dt² Tr f(A + tB)` at 0 as `Σ ã_mn Tr(E_m B E_n B)`.
///
/// Each `Tr(E_m B E_n B) = Tr(X X*)` with `X = E_m B E_n` is nonnegative, so
/// the sign of the result follows the signs of the `ã_mn`.
pub fn second_trace_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<f64> {
    same_shape(a, b)?;
    let eig = eigen_hermitian(a)?;
    let k = eig.len();
    let mut total = 0.0;
    for m in 0..k {
        let em_b = eig.idempotents[m].matrix() * b.matrix();
        for n in 0..k {
            let coeff = f.derivative_divided_difference(eig.eigenvalues[m], eig.eigenvalues[n], m == n)?;
            let x = &em_b * eig.idempotents[n].matrix();
            let block = x.frobenius_norm().powi(2);
            total += coeff * block;
        }
    }
    Ok(total)
}

/// `(f(A + hB) − f(A − hB)) / 2h`.
pub fn finite_difference_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    h: f64,
) -> Result<HermitianMatrix> {
    let plus = apply_function(f, &a.add(&b.scale(h)))?;
    let minus = apply_function(f, &a.sub(&b.scale(h)))?;
    Ok(plus.sub(&minus).scale(0.5 / h))
}

fn trace_along(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<f64> {
    trace_function(f, &a.add(&b.scale(t)))
}

/// Five-point stencil for `d/dt Tr f(A + tB)` at 0.
pub fn finite_difference_trace_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    h: f64,
) -> Result<f64> {
    let g = |t| trace_along(f, a, b, t);
    Ok((-g(2.0 * h)? + 8.0 * g(h)? - 8.0 * g(-h)? + g(-2.0 * h)?) / (12.0 * h))
}

/// Five-point stencil for `d²/dt² Tr f(A + tB)` at 0.
pub fn finite_difference_second_trace_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    h: f64,
) -> Result<f64> {
    let g = |t| trace_along(f, a, b, t);
    Ok((-g(2.0 * h)? + 16.0 * g(h)? - 30.0 * g(0.0)? + 16.0 * g(-h)? - g(-2.0 * h)?) / (12.0 * h * h))
}
