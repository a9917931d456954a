//! Recovering the constant `c` in `D = c · KL` for a local divergence.

use std::sync::Arc;

use serde::Serialize;

use super::{check_locality, kullback_leibler, Divergence, DEFAULT_T_GRID};
use crate::cone::State;
use crate::error::{Error, Result};
use crate::geometry::StateSpace;
use crate::sampling::trial_rng;

/// Trials of the locality precondition.
const LOCALITY_TRIALS: usize = 200;
const LOCALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct EntropyFit {
    /// Least-squares `c` with `D ≈ c · KL`; the generator is `c · (−H)`.
    pub constant: f64,
    /// Largest `|D − c · KL|` over the sample.
    pub residual: f64,
    pub samples: usize,
    /// Whether the residual is within tolerance and `c > 0`.
    pub entropy_generated: bool,
}

/// Fits `D(s1, s2) ≈ c · KL(s1, s2)` over `samples` pairs of interior states
/// of a simplex with at least three points, after checking locality.
pub fn fit_entropy_constant(
    div: &Divergence,
    space: &Arc<StateSpace>,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<EntropyFit> {
    let StateSpace::Simplex { n } = **space else {
        return Err(Error::Unsupported {
            space: space.to_string(),
            op: "entropy-constant fit",
        });
    };
    if n < 3 {
        return Err(Error::InvalidSpace("the fit needs at least three orthogonal states".into()));
    }
    if samples == 0 {
        return Err(Error::Empty("fit samples"));
    }
    let locality = check_locality(div, space, LOCALITY_TRIALS, &DEFAULT_T_GRID, LOCALITY_TOL, seed)?;
    if !locality.pass {
        return Err(Error::LocalityPrecondition(locality.max_gap));
    }
    let mut pairs = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut rng = trial_rng(seed, k as u64);
        let a = State::new_unchecked(space.clone(), space.sample_state(&mut rng));
        let b = State::new_unchecked(space.clone(), space.sample_state(&mut rng));
        let d = div.evaluate(&a, &b)?;
        if !d.is_finite() {
            return Err(Error::InfiniteDivergence);
        }
        pairs.push((d.value(), kullback_leibler(a.coords(), b.coords()).value()));
    }
    let num: f64 = pairs.iter().map(|(d, k)| d * k).sum();
    let den: f64 = pairs.iter().map(|(_, k)| k * k).sum();
    let constant = num / den;
    let residual = pairs.iter().fold(0.0f64, |m, (d, k)| m.max((d - constant * k).abs()));
    Ok(EntropyFit {
        constant,
        residual,
        samples,
        entropy_generated: residual <= tol && constant > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_scaled_kl() {
        let s3 = StateSpace::simplex(3).unwrap();
        for c in [0.5, 1.0, 3.0] {
            let fit = fit_entropy_constant(&Divergence::KullbackLeibler.scaled(c), &s3, 50, 1e-10, 1).unwrap();
            assert!((fit.constant - c).abs() <= 1e-8 * c);
            assert!(fit.residual <= 1e-10 && fit.entropy_generated);
        }
    }

    #[test]
    fn squared_euclidean_fails_upstream() {
        let s4 = StateSpace::simplex(4).unwrap();
        assert!(matches!(
            fit_entropy_constant(&Divergence::SquaredEuclidean, &s4, 50, 1e-10, 1),
            Err(Error::LocalityPrecondition(_))
        ));
        assert!(fit_entropy_constant(&Divergence::KullbackLeibler, &StateSpace::simplex(2).unwrap(), 5, 1e-10, 1).is_err());
    }
}
