//! Smallest faces, mutual singularity and orthogonality of states.

use serde::Serialize;

use super::polytope::members;
use super::{StateSpace, MEMBERSHIP_TOL};
use crate::cone::{same_space, AffineFunctional, State};
use crate::error::{Error, Result};
use crate::jordan::{eigen_hermitian, HermitianMatrix};
use crate::linalg::feasibility::max_distance;

/// Largest entry of `P₀P₁` accepted for orthogonal supports.
const SUPPORT_OVERLAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Face {
    /// Vertices of a polytope face, or the support of a simplex face.
    Vertices { indices: Vec<usize> },
    /// Support projection of a face of density matrices.
    Support { projection: HermitianMatrix, rank: usize },
    /// A single extreme point of a ball.
    Point { coords: Vec<f64> },
    Whole,
}

fn average(states: &[State]) -> Result<Vec<f64>> {
    let first = states.first().ok_or(Error::Empty("face generators"))?;
    if states.iter().any(|s| !same_space(s.space(), first.space())) {
        return Err(Error::MixedSpaces);
    }
    let mut avg = vec![0.0; first.coords().len()];
    for s in states {
        for (a, x) in avg.iter_mut().zip(s.coords()) {
            *a += x / states.len() as f64;
        }
    }
    Ok(avg)
}

fn support_indices(p: &[f64]) -> Vec<usize> {
    (0..p.len()).filter(|&i| p[i] > MEMBERSHIP_TOL).collect()
}

/// Projection onto the span of eigenvectors with eigenvalue above tolerance.
fn support_projection(m: &HermitianMatrix) -> Result<(HermitianMatrix, usize)> {
    let eig = eigen_hermitian(m)?;
    let mut p = HermitianMatrix::zeros(m.ring(), m.n());
    let mut rank = 0;
    for ((t, e), mult) in eig.eigenvalues.iter().zip(&eig.idempotents).zip(&eig.multiplicities) {
        if *t > MEMBERSHIP_TOL {
            p = p.add(e);
            rank += mult;
        }
    }
    Ok((p, rank))
}

pub fn smallest_face(states: &[State]) -> Result<Face> {
    let avg = average(states)?;
    let space = states[0].space();
    Ok(match &**space {
        StateSpace::Simplex { .. } => Face::Vertices {
            indices: support_indices(&avg),
        },
        StateSpace::Polytope(p) => Face::Vertices {
            indices: members(p.face_of(&avg)),
        },
        StateSpace::Ball { .. } | StateSpace::Spin { .. } => {
            let all_equal = states.iter().all(|s| max_distance(s.coords(), &avg) <= MEMBERSHIP_TOL);
            if all_equal && space.is_pure(&avg)? {
                Face::Point { coords: avg }
            } else {
                Face::Whole
            }
        }
        StateSpace::Density { .. } => {
            let (projection, rank) = support_projection(&space.matrix_of(&avg)?)?;
            Face::Support { projection, rank }
        }
    })
}

fn check_pair(s0: &State, s1: &State) -> Result<()> {
    if same_space(s0.space(), s1.space()) {
        Ok(())
    } else {
        Err(Error::MixedSpaces)
    }
}

/// A test `φ` on the whole space with `φ(s0) = 0` and `φ(s1) = 1`, if one exists.
pub fn mutually_singular(s0: &State, s1: &State) -> Result<Option<AffineFunctional>> {
    check_pair(s0, s1)?;
    let space = s0.space();
    Ok(match &**space {
        StateSpace::Polytope(p) => p.mutually_singular(s0.coords(), s1.coords()),
        _ => separate_non_polytope(space, s0, s1)?,
    })
}

/// Mutual singularity inside the smallest face containing both states; the
/// witness is returned as an affine functional whose values matter on that
/// face.
pub fn orthogonal(s0: &State, s1: &State) -> Result<Option<AffineFunctional>> {
    check_pair(s0, s1)?;
    let space = s0.space();
    Ok(match &**space {
        StateSpace::Polytope(p) => p.orthogonal(s0.coords(), s1.coords()),
        // on simplices, balls and matrix spaces the two notions coincide
        _ => separate_non_polytope(space, s0, s1)?,
    })
}

fn separate_non_polytope(space: &StateSpace, s0: &State, s1: &State) -> Result<Option<AffineFunctional>> {
    Ok(match space {
        StateSpace::Simplex { n } => {
            let a = support_indices(s0.coords());
            let b = support_indices(s1.coords());
            if a.iter().any(|i| b.contains(i)) {
                None
            } else {
                let mut linear = vec![0.0; *n];
                for i in b {
                    linear[i] = 1.0;
                }
                Some(AffineFunctional::new(linear, 0.0))
            }
        }
        StateSpace::Ball { .. } | StateSpace::Spin { .. } => {
            let x0 = s0.coords();
            let antipodal = x0.iter().zip(s1.coords()).all(|(a, b)| (a + b).abs() <= MEMBERSHIP_TOL);
            if antipodal && space.is_pure(x0)? && space.is_pure(s1.coords())? {
                Some(AffineFunctional::new(x0.iter().map(|c| -0.5 * c).collect(), 0.5))
            } else {
                None
            }
        }
        StateSpace::Density { .. } => {
            let (p0, _) = support_projection(&s0.matrix()?)?;
            let (p1, _) = support_projection(&s1.matrix()?)?;
            if (p0.matrix() * p1.matrix()).max_abs() <= SUPPORT_OVERLAP_TOL {
                Some(AffineFunctional::trace_pairing(&p1, 0.0))
            } else {
                None
            }
        }
        StateSpace::Polytope(_) => unreachable!("polytopes are handled by the caller"),
    })
}
