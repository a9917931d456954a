//! Euclidean Jordan algebras: Hermitian matrices over ℝ, ℂ, ℍ and the spin
//! factor, their functional calculus and the entropy-concavity verifier.

pub mod calculus;
pub mod checks;
pub mod eigen;
pub mod functions;
pub mod hermitian;
pub mod spin;

pub use calculus::{
    apply_function, directional_derivative, second_trace_derivative, trace_derivative, trace_function,
    von_neumann_entropy,
};
pub use checks::{check_concavity, euclidean_check, Algebra};
pub use eigen::{eigen_hermitian, EigenDecomposition};
pub use functions::ScalarFunction;
pub use hermitian::{jordan_product, trace, HermitianMatrix};
pub use spin::{spin_product, SpinElement};
