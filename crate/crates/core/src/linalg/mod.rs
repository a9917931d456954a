//! Linear-algebra building blocks shared by the geometry and Jordan modules.

pub mod feasibility;
pub mod jacobi;
pub mod matrix;
pub mod quaternion;

pub use matrix::{inner, orthonormalize, vector_norm, Matrix, QVector, Ring};
pub use quaternion::Quaternion;
