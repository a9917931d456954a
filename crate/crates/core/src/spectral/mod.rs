//! Spectra, majorization, entropy and spectrality.

mod landscape;

use serde::Serialize;

pub use landscape::{entropy_landscape, GridPoint, Landscape, LocalMaximum};

use crate::cone::{AffineFunctional, ConeElement, State};
use crate::error::{Error, Result};
use crate::geometry::polytope::Polytope;
use crate::geometry::{decompose, enumerate_orthogonal_decompositions, StateSpace};
use crate::sampling::trial_rng;

/// Tolerance on partial sums when comparing spectra.
pub const PARTIAL_SUM_TOL: f64 = 1e-10;
/// Spectra of decompositions of one element must have totals this close.
pub const TOTAL_TOL: f64 = 1e-9;

/// A weight vector sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(mut weights: Vec<f64>) -> Self {
        weights.sort_by(|a, b| b.total_cmp(a));
        Spectrum(weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `−Σ λ ln λ` in nats, with `0 ln 0 = 0`.
    pub fn entropy(&self) -> f64 {
        self.0.iter().filter(|&&w| w > 0.0).map(|w| -w * w.ln()).sum()
    }

    /// Elementwise comparison after zero padding, up to `PARTIAL_SUM_TOL`.
    pub fn approx_eq(&self, other: &Spectrum) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|i| (self.get(i) - other.get(i)).abs() <= PARTIAL_SUM_TOL)
    }

    fn get(&self, i: usize) -> f64 {
        self.0.get(i).copied().unwrap_or(0.0)
    }

    /// Lexicographic comparison after zero padding, up to `PARTIAL_SUM_TOL`.
    pub fn lex_cmp(&self, other: &Spectrum) -> std::cmp::Ordering {
        let n = self.len().max(other.len());
        for i in 0..n {
            let (a, b) = (self.get(i), other.get(i));
            if (a - b).abs() > PARTIAL_SUM_TOL {
                return a.total_cmp(&b);
            }
        }
        std::cmp::Ordering::Equal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Majorization {
    Dominates,
    Dominated,
    Equal,
    Incomparable,
}

/// Partial-sum comparison of two spectra padded with zeros.
pub fn majorizes(a: &Spectrum, b: &Spectrum) -> Result<Majorization> {
    let (ta, tb) = (a.total(), b.total());
    if (ta - tb).abs() > TOTAL_TOL {
        return Err(Error::UnequalTotals(ta, tb));
    }
    let n = a.len().max(b.len());
    let (mut sa, mut sb) = (0.0, 0.0);
    let (mut above, mut below) = (false, false);
    for i in 0..n {
        sa += a.get(i);
        sb += b.get(i);
        if sa > sb + PARTIAL_SUM_TOL {
            above = true;
        } else if sb > sa + PARTIAL_SUM_TOL {
            below = true;
        }
    }
    Ok(match (above, below) {
        (false, false) => Majorization::Equal,
        (true, false) => Majorization::Dominates,
        (false, true) => Majorization::Dominated,
        (true, true) => Majorization::Incomparable,
    })
}

/// A test certifying that components `i` and `j` are orthogonal: it vanishes
/// on component `i` and equals 1 on component `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub test: AffineFunctional,
}

/// `x = Σ λ_i s_i` with pairwise orthogonal pure states `s_i` and `λ_i > 0`.
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalDecomposition {
    pub weights: Vec<f64>,
    pub components: Vec<State>,
    pub witnesses: Vec<PairWitness>,
}

impl OrthogonalDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn spectrum(&self) -> Spectrum {
        spectrum_of(self)
    }

    /// `Σ λ_i s_i` as an ambient vector.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.components[0].coords().len()];
        for (w, s) in self.weights.iter().zip(&self.components) {
            for (xi, c) in x.iter_mut().zip(s.coords()) {
                *xi += w * c;
            }
        }
        x
    }

    /// Max-norm distance between `Σ λ_i s_i` and `x`.
    pub fn reconstruction_error(&self, x: &ConeElement) -> f64 {
        crate::linalg::feasibility::max_distance(&self.reconstruct(), &x.embedded())
            .max((self.trace() - x.trace()).abs())
    }
}

pub fn spectrum_of(dec: &OrthogonalDecomposition) -> Spectrum {
    Spectrum::new(dec.weights.clone())
}

/// Index of the majorization-maximal candidate; ties go to the
/// lexicographically largest spectrum, then to the earliest candidate.
pub(crate) fn select_maximal(spectra: &[Spectrum]) -> Option<usize> {
    let maximal: Vec<usize> = (0..spectra.len())
        .filter(|&i| {
            !spectra
                .iter()
                .any(|other| majorizes(other, &spectra[i]) == Ok(Majorization::Dominates))
        })
        .collect();
    let mut best: Option<usize> = None;
    for i in maximal {
        match best {
            Some(b) if spectra[i].lex_cmp(&spectra[b]) != std::cmp::Ordering::Greater => {}
            _ => best = Some(i),
        }
    }
    best
}

/// `H(λ s) = λ H(s) − λ ln λ`.
fn scale_entropy(state_entropy: f64, trace: f64) -> f64 {
    trace * state_entropy - trace * trace.ln()
}

/// Entropy of a cone element: the least `−Σ λ ln λ` over the spectra of its
/// orthogonal decompositions.
pub fn entropy(x: &ConeElement) -> Result<f64> {
    if x.is_apex() {
        return Err(Error::Apex("entropy"));
    }
    let state = x.state()?;
    let h = match &**x.space() {
        StateSpace::Polytope(p) => polytope_state_entropy(p, state.coords())?,
        _ => decompose(&ConeElement::from(state.clone()))?.spectrum().entropy(),
    };
    Ok(scale_entropy(h, x.trace()))
}

/// Minimum over basic decompositions on cliques of at most `d + 1` vertices;
/// the objective is concave on each clique's weight polytope, so its minimum
/// sits at a basic solution.
pub(crate) fn polytope_state_entropy(p: &Polytope, coords: &[f64]) -> Result<f64> {
    p.ensure_enumerable()?;
    let mut best = f64::INFINITY;
    for clique in p.cliques(p.affine_dim() + 1) {
        for w in p.representations(coords, &clique, None) {
            best = best.min(Spectrum::new(w).entropy());
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoDecomposition)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralityWitness {
    pub state: State,
    pub low_entropy: OrthogonalDecomposition,
    pub high_entropy: OrthogonalDecomposition,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralityVerdict {
    pub spectral: bool,
    /// Decided by a structural argument rather than by sampling.
    pub analytic: bool,
    pub states_checked: usize,
    pub witness: Option<SpectralityWitness>,
}

/// Simplices, balls, spin factors and density matrices are spectral by
/// uniqueness of their spectra. A polytope is probed at its vertex barycenter
/// and at `samples` random states by exhaustive enumeration.
pub fn is_spectral(space: &std::sync::Arc<StateSpace>, samples: usize, seed: u64) -> Result<SpectralityVerdict> {
    let StateSpace::Polytope(p) = &**space else {
        return Ok(SpectralityVerdict {
            spectral: true,
            analytic: true,
            states_checked: 0,
            witness: None,
        });
    };
    p.ensure_enumerable()?;
    let mut probes = vec![p.vertex_mean()];
    for k in 0..samples {
        probes.push(space.sample_state(&mut trial_rng(seed, k as u64)));
    }
    for (k, coords) in probes.iter().enumerate() {
        let state = State::new(space.clone(), coords.clone())?;
        let decs = enumerate_orthogonal_decompositions(&state, p.len())?;
        let spectra: Vec<Spectrum> = decs.iter().map(|d| d.spectrum()).collect();
        if spectra.iter().any(|s| !s.approx_eq(&spectra[0])) {
            let by_entropy = |pick_max: bool| {
                (0..decs.len())
                    .reduce(|a, b| {
                        let (ea, eb) = (spectra[a].entropy(), spectra[b].entropy());
                        if (pick_max && eb > ea) || (!pick_max && eb < ea) {
                            b
                        } else {
                            a
                        }
                    })
                    .expect("nonempty")
            };
            let (lo, hi) = (by_entropy(false), by_entropy(true));
            return Ok(SpectralityVerdict {
                spectral: false,
                analytic: false,
                states_checked: k + 1,
                witness: Some(SpectralityWitness {
                    state,
                    low_entropy: decs[lo].clone(),
                    high_entropy: decs[hi].clone(),
                }),
            });
        }
    }
    Ok(SpectralityVerdict {
        spectral: true,
        analytic: false,
        states_checked: probes.len(),
        witness: None,
    })
}

/// Largest number of pairwise orthogonal states, for spectral spaces.
pub fn spectral_rank(space: &std::sync::Arc<StateSpace>) -> Result<usize> {
    match &**space {
        StateSpace::Simplex { n } | StateSpace::Density { n, .. } => Ok(*n),
        StateSpace::Ball { .. } | StateSpace::Spin { .. } => Ok(2),
        StateSpace::Polytope(p) => {
            if is_spectral(space, 16, 0)?.spectral {
                Ok(p.max_clique())
            } else {
                Err(Error::NotSpectral)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;
    use proptest::prelude::*;

    fn sp(w: &[f64]) -> Spectrum {
        Spectrum::new(w.to_vec())
    }

    #[test]
    fn sorting_and_entropy() {
        assert_eq!(sp(&[0.25, 0.5, 0.25]).weights(), &[0.5, 0.25, 0.25]);
        assert_eq!(sp(&[1.0]).entropy(), 0.0);
        assert!((sp(&[0.5, 0.25, 0.25, 0.0]).entropy() - 1.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn majorization_examples() {
        assert_eq!(majorizes(&sp(&[1.0, 0.0]), &sp(&[0.5, 0.5])).unwrap(), Majorization::Dominates);
        assert_eq!(majorizes(&sp(&[0.5, 0.25, 0.25]), &sp(&[0.5, 0.25, 0.25])).unwrap(), Majorization::Equal);
        // partial sums ½ = ½, ¾ < 1, 1 = 1: the second spectrum majorizes the first
        assert_eq!(majorizes(&sp(&[0.5, 0.25, 0.25]), &sp(&[0.5, 0.5, 0.0])).unwrap(), Majorization::Dominated);
        assert_eq!(
            majorizes(&sp(&[0.6, 0.2, 0.2]), &sp(&[0.5, 0.4, 0.1])).unwrap(),
            Majorization::Incomparable
        );
        assert!(matches!(majorizes(&sp(&[1.0]), &sp(&[0.5])), Err(Error::UnequalTotals(..))));
    }

    #[test]
    fn spectral_verdicts() {
        let sq = StateSpace::unit_square();
        let v = is_spectral(&sq, 4, 1).unwrap();
        assert!(!v.spectral);
        let w = v.witness.unwrap();
        assert_eq!(w.state.coords(), &[0.5, 0.5]);
        assert!(w.low_entropy.spectrum().approx_eq(&sp(&[0.5, 0.5])));
        assert!(w.high_entropy.spectrum().approx_eq(&sp(&[0.25; 4])));
        assert!(is_spectral(&StateSpace::simplex(3).unwrap(), 4, 1).unwrap().spectral);
        assert!(is_spectral(&StateSpace::ball(2).unwrap(), 4, 1).unwrap().spectral);
        let tri = StateSpace::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = is_spectral(&tri, 8, 1).unwrap();
        assert!(v.spectral && !v.analytic);
    }

    #[test]
    fn ranks() {
        assert_eq!(spectral_rank(&StateSpace::ball(3).unwrap()).unwrap(), 2);
        assert_eq!(spectral_rank(&StateSpace::simplex(4).unwrap()).unwrap(), 4);
        assert_eq!(spectral_rank(&StateSpace::density(Ring::Complex, 3).unwrap()).unwrap(), 3);
        assert!(matches!(spectral_rank(&StateSpace::unit_square()), Err(Error::NotSpectral)));
        let tri = StateSpace::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(spectral_rank(&tri).unwrap(), 3);
    }

    #[test]
    fn square_entropies() {
        let sq = StateSpace::unit_square();
        let at = |x: f64, y: f64| entropy(&State::new(sq.clone(), vec![x, y]).unwrap().into()).unwrap();
        assert!((at(0.5, 0.25) - 1.5 * 2f64.ln()).abs() < 1e-12);
        assert!((at(0.5, 0.5) - 2f64.ln()).abs() < 1e-12);
        assert!(at(1.0, 0.0).abs() < 1e-15);
        let x = State::new(sq, vec![0.5, 0.25]).unwrap().scaled(2.0).unwrap();
        assert!((entropy(&x).unwrap() - (2.0 * 1.5 * 2f64.ln() - 2.0 * 2f64.ln())).abs() < 1e-12);
        assert!(matches!(entropy(&ConeElement::apex(x.space().clone())), Err(Error::Apex(_))));
    }

    proptest! {
        #[test]
        fn majorization_is_antisymmetric(a in proptest::collection::vec(0.0..1.0f64, 1..6), b in proptest::collection::vec(0.0..1.0f64, 1..6)) {
            let ta: f64 = a.iter().sum();
            let tb: f64 = b.iter().sum();
            prop_assume!(ta > 1e-3 && tb > 1e-3);
            let sa = sp(&a.iter().map(|x| x / ta).collect::<Vec<_>>());
            let sb = sp(&b.iter().map(|x| x / tb).collect::<Vec<_>>());
            let ab = majorizes(&sa, &sb).unwrap();
            let ba = majorizes(&sb, &sa).unwrap();
            let expected = match ab {
                Majorization::Dominates => Majorization::Dominated,
                Majorization::Dominated => Majorization::Dominates,
                other => other,
            };
            prop_assert_eq!(ba, expected);
            if ab == Majorization::Dominates {
                prop_assert!(sa.entropy() <= sb.entropy() + 1e-12);
            }
        }
    }
}
