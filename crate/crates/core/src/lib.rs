//! Spectral sets, orthogonal decompositions and entropy on the positive cone
//! of a convex state space, with the Bregman-divergence locality and
//! sufficiency checkers and the Jordan-algebra calculus behind strict
//! concavity of the entropy.

pub mod cone;
pub mod divergence;
pub mod error;
pub mod geometry;
pub mod jordan;
pub mod json;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use report::CheckReport;
