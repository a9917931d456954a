//! The sufficiency checker: divergences must be unchanged by channels that
//! can be undone on the tested family of states.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::Divergence;
use crate::cone::State;
use crate::error::{Error, Result};
use crate::geometry::StateSpace;
use crate::linalg::{Matrix, QVector, Quaternion, Ring};
use crate::report::{extended_value, CheckReport};
use crate::sampling::{probability_vector, random_basis, spectral_matrix, trial_rng, TrialRng};

/// `Ψ(Φ(s))` must reproduce `s` within this max-norm distance.
pub const RECOVERY_TOL: f64 = 1e-9;

type StateMap = Arc<dyn Fn(&State) -> Result<State> + Send + Sync>;
type FamilySampler = Arc<dyn Fn(&mut TrialRng) -> State + Send + Sync>;

/// A channel `Φ` with a recovery map `Ψ` and the family on which `Ψ∘Φ = id`.
#[derive(Clone)]
pub struct ChannelPair {
    pub name: String,
    pub forward: StateMap,
    pub backward: StateMap,
    pub family: FamilySampler,
}

fn on_coords(space: &Arc<StateSpace>, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> StateMap {
    let space = space.clone();
    Arc::new(move |s: &State| Ok(State::new_unchecked(space.clone(), f(s.coords()))))
}

fn whole_space(space: &Arc<StateSpace>) -> FamilySampler {
    let space = space.clone();
    Arc::new(move |rng: &mut TrialRng| State::new_unchecked(space.clone(), space.sample_state(rng)))
}

/// Adds coordinate `j` into `i`.
fn merge(p: &[f64], i: usize, j: usize) -> Vec<f64> {
    let mut q = p.to_vec();
    q[i] += q[j];
    q[j] = 0.0;
    q
}

/// Splits `p_i + p_j` into the fractions `r`, `1 − r`.
fn split(p: &[f64], i: usize, j: usize, r: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    let total = q[i] + q[j];
    q[i] = r * total;
    q[j] = (1.0 - r) * total;
    q
}

fn simplex_suite(space: &Arc<StateSpace>, n: usize, rng: &mut TrialRng) -> Vec<ChannelPair> {
    let mut suite = Vec::new();
    let mut perms: Vec<Vec<usize>> = vec![(0..n).rev().collect(), (1..n).chain([0]).collect()];
    let mut shuffled: Vec<usize> = (0..n).collect();
    shuffled.shuffle(rng);
    perms.push(shuffled);
    for (k, perm) in perms.into_iter().enumerate() {
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let (fwd, bwd) = (perm.clone(), inverse);
        suite.push(ChannelPair {
            name: format!("permutation-{k}"),
            forward: on_coords(space, move |p| fwd.iter().map(|&i| p[i]).collect()),
            backward: on_coords(space, move |p| bwd.iter().map(|&i| p[i]).collect()),
            family: whole_space(space),
        });
    }
    if n >= 2 {
        for (i, j) in [(0, 1), (n - 2, n - 1)] {
            let r = 0.2 + 0.6 * rng.random::<f64>();
            let fam_space = space.clone();
            suite.push(ChannelPair {
                name: format!("merge-{i}-{j}"),
                forward: on_coords(space, move |p| merge(p, i, j)),
                backward: on_coords(space, move |p| split(p, i, j, r)),
                family: Arc::new(move |rng: &mut TrialRng| {
                    let p = fam_space.sample_state(rng);
                    State::new_unchecked(fam_space.clone(), split(&p, i, j, r))
                }),
            });
        }
    }
    suite
}

fn conjugate(u: &Matrix, m: &Matrix) -> Matrix {
    &(u * m) * &u.adjoint()
}

/// Columns `basis[k]` as a matrix.
fn unitary(ring: Ring, basis: &[QVector]) -> Matrix {
    Matrix::from_fn(ring, basis.len(), |i, j| basis[j][i])
}

/// Diagonal of `U* ρ U`.
fn diagonal_in(u: &Matrix, m: &Matrix) -> Vec<f64> {
    let d = conjugate(&u.adjoint(), m);
    (0..d.n()).map(|i| d.get(i, i).re).collect()
}

fn density_suite(space: &Arc<StateSpace>, ring: Ring, n: usize, rng: &mut TrialRng) -> Result<Vec<ChannelPair>> {
    let mut suite = Vec::new();
    let matrix_map = |space: &Arc<StateSpace>, f: Arc<dyn Fn(&Matrix) -> Matrix + Send + Sync>| -> StateMap {
        let space = space.clone();
        Arc::new(move |s: &State| {
            let m = s.matrix()?;
            Ok(State::new_unchecked(space.clone(), f(m.matrix()).hermitian_part().coords()))
        })
    };
    for k in 0..3 {
        let u = unitary(ring, &random_basis(rng, ring, n));
        let (uf, ub) = (u.clone(), u.adjoint());
        suite.push(ChannelPair {
            name: format!("unitary-{k}"),
            forward: matrix_map(space, Arc::new(move |m| conjugate(&uf, m))),
            backward: matrix_map(space, Arc::new(move |m| conjugate(&ub, m))),
            family: whole_space(space),
        });
    }
    // ρ ↦ ρ ⊕ 0 into n + 1 dimensions; the recovery compresses back and
    // moves the leftover weight onto the first basis vector
    let larger = StateSpace::density(ring, n + 1)?;
    suite.push(ChannelPair {
        name: "block-embedding".into(),
        forward: matrix_map(
            &larger,
            Arc::new(move |m| {
                Matrix::from_fn(ring, n + 1, |i, j| if i < n && j < n { m.get(i, j) } else { Quaternion::ZERO })
            }),
        ),
        backward: matrix_map(
            space,
            Arc::new(move |m| {
                let rest = m.get(n, n).re;
                Matrix::from_fn(ring, n, |i, j| {
                    let q = m.get(i, j);
                    if i == 0 && j == 0 {
                        q + Quaternion::real(rest)
                    } else {
                        q
                    }
                })
            }),
        ),
        family: whole_space(space),
    });
    if n >= 2 {
        // dephase in a random basis, then merge the first two levels
        let basis = random_basis(rng, ring, n);
        let u = unitary(ring, &basis);
        let r = 0.2 + 0.6 * rng.random::<f64>();
        let rebuild = move |u: &Matrix, p: Vec<f64>| conjugate(u, &Matrix::diagonal(ring, &p));
        let (uf, ub) = (u.clone(), u.clone());
        let fam_space = space.clone();
        suite.push(ChannelPair {
            name: "dephased-merge".into(),
            forward: matrix_map(space, Arc::new(move |m| rebuild(&uf, merge(&diagonal_in(&uf, m), 0, 1)))),
            backward: matrix_map(space, Arc::new(move |m| rebuild(&ub, split(&diagonal_in(&ub, m), 0, 1, r)))),
            family: Arc::new(move |rng: &mut TrialRng| {
                let p = split(&probability_vector(rng, n), 0, 1, r);
                State::new_unchecked(fam_space.clone(), spectral_matrix(ring, &basis, &p).hermitian_part().coords())
            }),
        });
    }
    Ok(suite)
}

/// Permutations and reversible merges on simplices; unitary conjugations,
/// a block embedding and a dephased merge on density matrices.
pub fn builtin_suite(space: &Arc<StateSpace>, seed: u64) -> Result<Vec<ChannelPair>> {
    let mut rng = trial_rng(seed, u64::MAX);
    match **space {
        StateSpace::Simplex { n } => Ok(simplex_suite(space, n, &mut rng)),
        StateSpace::Density { ring, n } => density_suite(space, ring, n, &mut rng),
        _ => Err(Error::Unsupported {
            space: space.to_string(),
            op: "sufficiency channels",
        }),
    }
}

struct PairOutcome {
    gap: f64,
    recovery: f64,
    witness: Value,
}

fn run_pair(div: &Divergence, pair: &ChannelPair, seed: u64, k: usize, trial: usize) -> Result<PairOutcome> {
    let mut rng = trial_rng(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15), trial as u64);
    let s1 = (pair.family)(&mut rng);
    let s2 = (pair.family)(&mut rng);
    let (f1, f2) = ((pair.forward)(&s1)?, (pair.forward)(&s2)?);
    let recovery = (pair.backward)(&f1)?.distance(&s1).max((pair.backward)(&f2)?.distance(&s2));
    let before = div.evaluate(&s1, &s2)?;
    let after = div.evaluate(&f1, &f2)?;
    Ok(PairOutcome {
        gap: before.gap(after),
        recovery,
        witness: json!({
            "channel": pair.name,
            "trial": trial,
            "s1": s1.coords(),
            "s2": s2.coords(),
            "before": before,
            "after": after,
        }),
    })
}

/// For every channel pair and `trials` pairs from its family, compares
/// `D(Φs1, Φs2)` with `D(s1, s2)`. Pairs whose recovery fails on the family
/// are counted separately as precondition failures.
pub fn check_sufficiency(
    div: &Divergence,
    space: &Arc<StateSpace>,
    suite: &[ChannelPair],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let mut max_gap = 0.0f64;
    let mut witness = Value::Null;
    let mut channels = Vec::new();
    let mut precondition_failures = Vec::new();
    for (k, pair) in suite.iter().enumerate() {
        let outcomes: Vec<PairOutcome> = (0..trials)
            .into_par_iter()
            .map(|trial| run_pair(div, pair, seed, k, trial))
            .collect::<Result<_>>()?;
        let mut channel_gap = 0.0f64;
        let mut recovery = 0.0f64;
        for o in &outcomes {
            recovery = recovery.max(o.recovery);
            if o.recovery > RECOVERY_TOL {
                continue;
            }
            channel_gap = channel_gap.max(o.gap);
            if o.gap > max_gap || (witness.is_null() && o.gap >= max_gap) {
                max_gap = o.gap;
                witness = o.witness.clone();
            }
        }
        if recovery > RECOVERY_TOL {
            precondition_failures.push(json!({"channel": pair.name, "recovery_error": recovery}));
        }
        channels.push(json!({
            "channel": pair.name,
            "max_gap": extended_value(channel_gap),
            "recovery_error": recovery,
        }));
    }
    let pass = precondition_failures.is_empty() && max_gap <= tol;
    let exploratory = matches!(**space, StateSpace::Density { ring: Ring::Quaternion, .. });
    Ok(CheckReport::new("sufficiency", pass, max_gap, witness, trials, seed)
        .with("divergence", div.to_string())
        .with("space", space.to_string())
        .with("tol", tol)
        .with("channels", Value::Array(channels))
        .with("precondition_failures", Value::Array(precondition_failures))
        .with("exploratory", exploratory))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kl_is_sufficient_on_the_simplex() {
        let s4 = StateSpace::simplex(4).unwrap();
        let suite = builtin_suite(&s4, 3).unwrap();
        let r = check_sufficiency(&Divergence::KullbackLeibler, &s4, &suite, 100, 1e-9, 3).unwrap();
        assert!(r.pass, "{}", r.to_json());
        assert!(r.max_gap <= 1e-12);
        let r = check_sufficiency(&Divergence::SquaredEuclidean, &s4, &suite, 100, 1e-9, 3).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness["channel"].as_str().unwrap().split('-').next(), Some("merge"));
    }

    #[test]
    fn matrix_relative_entropy_is_sufficient() {
        for ring in [Ring::Real, Ring::Complex] {
            let q = StateSpace::density(ring, 3).unwrap();
            let suite = builtin_suite(&q, 4).unwrap();
            let r = check_sufficiency(&Divergence::MatrixRelativeEntropy, &q, &suite, 30, 1e-9, 4).unwrap();
            assert!(r.pass, "{}", r.to_json());
        }
    }

    #[test]
    fn broken_recovery_is_a_precondition_failure() {
        let s3 = StateSpace::simplex(3).unwrap();
        let mut suite = builtin_suite(&s3, 0).unwrap();
        // a merge whose family is the whole simplex cannot be undone
        let mut bad = suite.pop().unwrap();
        bad.family = whole_space(&s3);
        let r = check_sufficiency(&Divergence::KullbackLeibler, &s3, &[bad], 10, 1e-9, 0).unwrap();
        assert!(!r.pass);
        assert_eq!(r.extras["precondition_failures"].as_array().unwrap().len(), 1);
    }
}
