//! Orthogonal decompositions into pure states.

use std::sync::Arc;

use super::polytope::Polytope;
use super::StateSpace;
use crate::cone::{AffineFunctional, ConeElement, State};
use crate::error::{Error, Result};
use crate::jordan::{eigen_hermitian, HermitianMatrix};
use crate::linalg::feasibility::max_distance;
use crate::linalg::Matrix;
use crate::spectral::{select_maximal, OrthogonalDecomposition, PairWitness, Spectrum};

/// Weights at or below this are dropped from decompositions.
pub const ZERO_WEIGHT: f64 = 1e-12;
/// Interior samples per family direction: `τ = k/11`, `k = 1..=10`.
const FAMILY_GRID: usize = 10;

/// An orthogonal decomposition `x = Σ λ_i s_i` with at most `d + 1` terms.
/// Polytopes return a majorization-maximal one among the clique solutions.
pub fn decompose(x: &ConeElement) -> Result<OrthogonalDecomposition> {
    let state = x.state()?;
    let space = x.space();
    let t = x.trace();
    let mut dec = match &**space {
        StateSpace::Simplex { n } => simplex_decomposition(space, *n, state.coords()),
        StateSpace::Ball { .. } | StateSpace::Spin { .. } => ball_decomposition(space, state.coords()),
        StateSpace::Density { .. } => density_decomposition(space, state)?,
        StateSpace::Polytope(p) => polytope_decomposition(space, p, state.coords())?,
    };
    for w in &mut dec.weights {
        *w *= t;
    }
    Ok(dec)
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn simplex_decomposition(space: &Arc<StateSpace>, n: usize, p: &[f64]) -> OrthogonalDecomposition {
    let mut support: Vec<usize> = (0..n).filter(|&i| p[i] > ZERO_WEIGHT).collect();
    support.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    let witnesses = pairs(support.len())
        .map(|(i, j)| PairWitness {
            i,
            j,
            test: AffineFunctional::new(unit(n, support[j]), 0.0),
        })
        .collect();
    OrthogonalDecomposition {
        weights: support.iter().map(|&i| p[i]).collect(),
        components: support
            .iter()
            .map(|&i| State::new_unchecked(space.clone(), unit(n, i)))
            .collect(),
        witnesses,
    }
}

/// `x = (1+r)/2 · u + (1−r)/2 · (−u)` with `u = x/r`; the center uses the
/// first coordinate axis.
fn ball_decomposition(space: &Arc<StateSpace>, x: &[f64]) -> OrthogonalDecomposition {
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let u: Vec<f64> = if r > ZERO_WEIGHT {
        x.iter().map(|c| c / r).collect()
    } else {
        unit(x.len(), 0)
    };
    let r = r.min(1.0);
    let plus = (1.0 + r) / 2.0;
    let minus = (1.0 - r) / 2.0;
    let mut dec = OrthogonalDecomposition {
        weights: vec![plus],
        components: vec![State::new_unchecked(space.clone(), u.clone())],
        witnesses: Vec::new(),
    };
    if minus > ZERO_WEIGHT {
        dec.weights.push(minus);
        dec.components
            .push(State::new_unchecked(space.clone(), u.iter().map(|c| -c).collect()));
        dec.witnesses.push(PairWitness {
            i: 0,
            j: 1,
            test: AffineFunctional::new(u.iter().map(|c| -0.5 * c).collect(), 0.5),
        });
    }
    dec
}

/// Rank-one eigenprojections `u u*` weighted by their eigenvalues.
fn density_decomposition(space: &Arc<StateSpace>, state: &State) -> Result<OrthogonalDecomposition> {
    let StateSpace::Density { ring, .. } = **space else {
        unreachable!("density space")
    };
    let eig = eigen_hermitian(&state.matrix()?)?;
    let mut weights = Vec::new();
    let mut projections = Vec::new();
    for (value, vectors) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *value <= ZERO_WEIGHT {
            continue;
        }
        for u in vectors {
            weights.push(*value);
            projections.push(HermitianMatrix::from_computed(Matrix::outer(ring, u, u).hermitian_part()));
        }
    }
    let witnesses = pairs(weights.len())
        .map(|(i, j)| PairWitness {
            i,
            j,
            test: AffineFunctional::trace_pairing(&projections[j], 0.0),
        })
        .collect();
    Ok(OrthogonalDecomposition {
        weights,
        components: projections
            .iter()
            .map(|p| State::new_unchecked(space.clone(), p.matrix().coords()))
            .collect(),
        witnesses,
    })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// Decomposition on the vertices carrying weight in `w`, heaviest first.
fn from_vertex_weights(space: &Arc<StateSpace>, p: &Polytope, w: &[f64]) -> OrthogonalDecomposition {
    let mut support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > ZERO_WEIGHT).collect();
    support.sort_by(|&a, &b| w[b].total_cmp(&w[a]));
    let witnesses = pairs(support.len())
        .map(|(i, j)| PairWitness {
            i,
            j,
            test: p
                .vertex_witness(support[i], support[j])
                .expect("clique members are orthogonal")
                .clone(),
        })
        .collect();
    OrthogonalDecomposition {
        weights: support.iter().map(|&i| w[i]).collect(),
        components: support
            .iter()
            .map(|&i| State::new_unchecked(space.clone(), p.vertices()[i].clone()))
            .collect(),
        witnesses,
    }
}

fn polytope_decomposition(space: &Arc<StateSpace>, p: &Polytope, x: &[f64]) -> Result<OrthogonalDecomposition> {
    let candidates: Vec<Vec<f64>> = p
        .cliques(p.affine_dim() + 1)
        .iter()
        .flat_map(|clique| p.representations(x, clique, None))
        .collect();
    let spectra: Vec<Spectrum> = candidates.iter().map(|w| Spectrum::new(w.clone())).collect();
    let best = select_maximal(&spectra).ok_or(Error::NoDecomposition)?;
    Ok(from_vertex_weights(space, p, &candidates[best]))
}

/// Every orthogonal decomposition of a polytope state supported on at most
/// `max_support` vertices. Where the weights on a clique are not unique the
/// solution set is sampled at its vertices, its centroid, and ten points on
/// the segment from the centroid to each vertex.
pub fn enumerate_orthogonal_decompositions(s: &State, max_support: usize) -> Result<Vec<OrthogonalDecomposition>> {
    let space = s.space();
    let StateSpace::Polytope(p) = &**space else {
        return Err(Error::Unsupported {
            space: space.to_string(),
            op: "decomposition enumeration",
        });
    };
    p.ensure_enumerable()?;
    if max_support > p.len() {
        return Err(Error::SupportBound {
            requested: max_support,
            available: p.len(),
        });
    }
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut push = |w: Vec<f64>| {
        let w: Vec<f64> = w.into_iter().map(|x| if x > ZERO_WEIGHT { x } else { 0.0 }).collect();
        if !found.iter().any(|f| max_distance(f, &w) <= ZERO_WEIGHT) {
            found.push(w);
        }
    };
    for clique in p.cliques(max_support) {
        let basic = p.representations(s.coords(), &clique, None);
        if basic.len() >= 2 {
            let k = basic.len() as f64;
            let mut centroid = vec![0.0; p.len()];
            for w in &basic {
                centroid.iter_mut().zip(w).for_each(|(c, x)| *c += x / k);
            }
            for w in &basic {
                push(w.clone());
            }
            push(centroid.clone());
            for w in &basic {
                for step in 1..=FAMILY_GRID {
                    let tau = step as f64 / (FAMILY_GRID + 1) as f64;
                    push(centroid.iter().zip(w).map(|(c, x)| (1.0 - tau) * c + tau * x).collect());
                }
            }
        } else {
            for w in basic {
                push(w);
            }
        }
    }
    Ok(found.iter().map(|w| from_vertex_weights(space, p, w)).collect())
}
