//! Randomized verifiers for strict concavity of the entropy and positivity of
//! the trace form.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::calculus::{finite_difference_second_trace_derivative, second_trace_derivative, von_neumann_entropy};
use super::functions::ScalarFunction;
use super::hermitian::HermitianMatrix;
use super::spin::{
    spin_entropy, spin_finite_difference_second, spin_product, spin_second_trace_derivative, spin_trace_form,
    SpinElement,
};
use crate::error::{Error, Result};
use crate::linalg::Ring;
use crate::report::CheckReport;
use crate::sampling::{
    ball_point, gaussian, probability_vector, random_basis, random_hermitian, spectral_matrix, trial_rng, unit_vector,
    TrialRng,
};

/// Step of the five-point stencil used as the second-derivative oracle.
pub const FD_STEP: f64 = 1e-3;
/// Relative agreement required between the analytic and stencil values.
pub const FD_TOL: f64 = 1e-5;
/// Strictness margin factor: the second derivative must be below `−ε‖B‖²`.
pub const STRICTNESS: f64 = 1e-10;
pub const MIDPOINT_SLACK: f64 = -1e-10;

/// A Euclidean Jordan algebra: Hermitian matrices over a ring, or a spin factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algebra {
    Matrix { ring: Ring, n: usize },
    Spin { d: usize },
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Matrix { ring, n } => write!(f, "{ring}{n}"),
            Algebra::Spin { d } => write!(f, "spin{d}"),
        }
    }
}

impl FromStr for Algebra {
    type Err = Error;

    /// `real3`, `complex2`, `quaternion4`, `spin8`, ...
    fn from_str(s: &str) -> Result<Self> {
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (kind, size) = s.split_at(split);
        let size: usize = size
            .parse()
            .map_err(|_| Error::Parse(format!("algebra `{s}` needs a size suffix, e.g. complex2")))?;
        let algebra = match kind {
            "real" => Algebra::Matrix { ring: Ring::Real, n: size },
            "complex" => Algebra::Matrix { ring: Ring::Complex, n: size },
            "quaternion" => Algebra::Matrix { ring: Ring::Quaternion, n: size },
            "spin" => Algebra::Spin { d: size },
            _ => return Err(Error::Parse(format!("unknown algebra `{s}`"))),
        };
        algebra.validate()?;
        Ok(algebra)
    }
}

impl Algebra {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Algebra::Matrix { n, .. } if (1..=5).contains(&n) => Ok(()),
            Algebra::Spin { d } if (1..=8).contains(&d) => Ok(()),
            _ => Err(Error::InvalidSpace(format!("{self}: matrices need n in 1..=5, spin factors d in 1..=8"))),
        }
    }
}

/// Eigenvalues in `[0.1, 1]`; every third trial repeats the largest one.
fn positive_spectrum(rng: &mut TrialRng, k: usize, trial: u64) -> Vec<f64> {
    let mut t: Vec<f64> = (0..k).map(|_| 0.1 + 0.9 * rng.random::<f64>()).collect();
    if trial.is_multiple_of(3) && k > 1 {
        t[1] = t[0];
    }
    t
}

struct ConcavityTrial {
    second: f64,
    fd: f64,
    norm_b: f64,
    midpoint_slack: f64,
    a: Value,
    b: Value,
}

impl ConcavityTrial {
    fn relative_gap(&self) -> f64 {
        (self.second - self.fd).abs() / self.second.abs().max(f64::MIN_POSITIVE)
    }

    fn ok(&self) -> bool {
        self.second < -STRICTNESS * self.norm_b * self.norm_b
            && self.relative_gap() <= FD_TOL
            && self.midpoint_slack >= MIDPOINT_SLACK
    }
}

fn random_density(rng: &mut TrialRng, ring: Ring, n: usize, pure: bool) -> HermitianMatrix {
    let basis = random_basis(rng, ring, n);
    let mut w = probability_vector(rng, n);
    if pure {
        w = vec![0.0; n];
        w[0] = 1.0;
    }
    HermitianMatrix::from_computed(spectral_matrix(ring, &basis, &w))
}

fn matrix_trial(ring: Ring, n: usize, seed: u64, trial: u64) -> Result<ConcavityTrial> {
    let f = ScalarFunction::neg_entropy();
    let mut rng = trial_rng(seed, trial);
    let basis = random_basis(&mut rng, ring, n);
    let t = positive_spectrum(&mut rng, n, trial);
    let a = HermitianMatrix::from_computed(spectral_matrix(ring, &basis, &t));
    let raw = HermitianMatrix::from_computed(random_hermitian(&mut rng, ring, n));
    let b = raw.scale(1.0 / raw.frobenius_norm());
    let second = second_trace_derivative(&f, &a, &b)?;
    let fd = finite_difference_second_trace_derivative(&f, &a, &b, FD_STEP)?;

    let r0 = random_density(&mut rng, ring, n, trial.is_multiple_of(5));
    let r1 = random_density(&mut rng, ring, n, trial.is_multiple_of(7));
    let mid = r0.add(&r1).scale(0.5);
    let slack = von_neumann_entropy(&mid)? - 0.5 * (von_neumann_entropy(&r0)? + von_neumann_entropy(&r1)?);
    Ok(ConcavityTrial {
        second,
        fd,
        norm_b: b.frobenius_norm(),
        midpoint_slack: slack,
        a: serde_json::to_value(&a).expect("matrix serializes"),
        b: serde_json::to_value(&b).expect("matrix serializes"),
    })
}

fn spin_trial(d: usize, seed: u64, trial: u64) -> Result<ConcavityTrial> {
    let f = ScalarFunction::neg_entropy();
    let mut rng = trial_rng(seed, trial);
    let t = positive_spectrum(&mut rng, 2, trial);
    let axis = unit_vector(&mut rng, d);
    let a = SpinElement::new(0.5 * (t[0] + t[1]), axis.iter().map(|u| 0.5 * (t[0] - t[1]) * u).collect());
    let raw = SpinElement::new(gaussian(&mut rng), (0..d).map(|_| gaussian(&mut rng)).collect());
    let b = raw.scale(1.0 / spin_trace_form(&raw, &raw).sqrt());
    let second = spin_second_trace_derivative(&f, &a, &b)?;
    let fd = spin_finite_difference_second(&f, &a, &b, FD_STEP)?;

    let x0 = if trial.is_multiple_of(5) { unit_vector(&mut rng, d) } else { ball_point(&mut rng, d) };
    let x1 = if trial.is_multiple_of(7) { unit_vector(&mut rng, d) } else { ball_point(&mut rng, d) };
    let s0 = SpinElement::from_ball_point(&x0);
    let s1 = SpinElement::from_ball_point(&x1);
    let mid = s0.add(&s1).scale(0.5);
    let slack = spin_entropy(&mid)? - 0.5 * (spin_entropy(&s0)? + spin_entropy(&s1)?);
    Ok(ConcavityTrial {
        second,
        fd,
        norm_b: spin_trace_form(&b, &b).sqrt(),
        midpoint_slack: slack,
        a: serde_json::to_value(&a).expect("spin element serializes"),
        b: serde_json::to_value(&b).expect("spin element serializes"),
    })
}

/// Strict concavity of `Tr(−x ln x)` on random positive elements and
/// normalized directions, checked against a finite-difference oracle, plus
/// midpoint concavity of the entropy on random state pairs.
pub fn check_concavity(algebra: Algebra, trials: usize, seed: u64) -> Result<CheckReport> {
    algebra.validate()?;
    let results: Vec<ConcavityTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| match algebra {
            Algebra::Matrix { ring, n } => matrix_trial(ring, n, seed, trial),
            Algebra::Spin { d } => spin_trial(d, seed, trial),
        })
        .collect::<Result<_>>()?;

    let failures = results.iter().filter(|r| !r.ok()).count();
    let max_gap = results.iter().fold(0.0f64, |m, r| m.max(r.relative_gap()));
    let max_second = results.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.second));
    let min_slack = results.iter().fold(f64::INFINITY, |m, r| m.min(r.midpoint_slack));
    // first failing trial, else the trial closest to violating strictness
    let witness_index = results
        .iter()
        .position(|r| !r.ok())
        .or_else(|| {
            results
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.second.total_cmp(&y.1.second))
                .map(|(i, _)| i)
        });
    let witness = witness_index.map_or(Value::Null, |i| {
        let r = &results[i];
        json!({
            "trial": i,
            "a": r.a,
            "b": r.b,
            "second_derivative": r.second,
            "finite_difference": r.fd,
            "midpoint_slack": r.midpoint_slack,
        })
    });
    Ok(CheckReport::new("concavity", failures == 0, max_gap, witness, trials, seed)
        .with("algebra", algebra.to_string())
        .with("failures", failures)
        .with("max_second_derivative", if trials > 0 { max_second } else { 0.0 })
        .with("min_midpoint_slack", if trials > 0 { min_slack } else { 0.0 }))
}

/// `Tr(x∘x) > 0` for random nonzero `x`, compared with `Σ|x_ij|²`
/// (matrices) or `2(t² + |v|²)` (spin factor).
pub fn euclidean_check(algebra: Algebra, trials: usize, seed: u64) -> Result<CheckReport> {
    algebra.validate()?;
    let samples: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            match algebra {
                Algebra::Matrix { ring, n } => {
                    let x = HermitianMatrix::from_computed(random_hermitian(&mut rng, ring, n));
                    let sq = x.jordan_product(&x).expect("same size");
                    (sq.trace(), x.frobenius_norm().powi(2))
                }
                Algebra::Spin { d } => {
                    let x = SpinElement::new(gaussian(&mut rng), (0..d).map(|_| gaussian(&mut rng)).collect());
                    let sq = spin_product(&x, &x).expect("same size");
                    (sq.trace(), 2.0 * (x.scalar * x.scalar + x.vector_norm().powi(2)))
                }
            }
        })
        .collect();
    let zero_trace = match algebra {
        Algebra::Matrix { ring, n } => {
            let z = HermitianMatrix::zeros(ring, n);
            z.jordan_product(&z)?.trace()
        }
        Algebra::Spin { d } => spin_product(&SpinElement::zero(d), &SpinElement::zero(d))?.trace(),
    };
    let gaps: Vec<f64> = samples.iter().map(|(t, s)| (t - s).abs() / s.max(f64::MIN_POSITIVE)).collect();
    let max_gap = gaps.iter().fold(0.0f64, |m, g| m.max(*g));
    let bad = samples.iter().zip(&gaps).position(|((t, _), g)| *t <= 0.0 || *g > 1e-12);
    let min_trace = samples.iter().fold(f64::INFINITY, |m, (t, _)| m.min(*t));
    let witness = match bad {
        Some(i) => json!({"trial": i, "trace_of_square": samples[i].0, "sum_of_squares": samples[i].1}),
        None => json!({"zero_element_trace": zero_trace, "min_trace_of_square": min_trace}),
    };
    Ok(
        CheckReport::new("euclidean", bad.is_none() && zero_trace == 0.0, max_gap, witness, trials, seed)
            .with("algebra", algebra.to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_algebra_names() {
        assert_eq!("complex2".parse::<Algebra>().unwrap(), Algebra::Matrix { ring: Ring::Complex, n: 2 });
        assert_eq!("spin8".parse::<Algebra>().unwrap(), Algebra::Spin { d: 8 });
        assert!("spin9".parse::<Algebra>().is_err());
        assert!("octonion3".parse::<Algebra>().is_err());
        assert!("real".parse::<Algebra>().is_err());
    }

    #[test]
    fn concavity_holds_on_small_runs() {
        for name in ["real3", "complex2", "quaternion2", "spin3"] {
            let r = check_concavity(name.parse().unwrap(), 50, 42).unwrap();
            assert!(r.pass, "{name}: {}", r.to_json());
        }
    }

    #[test]
    fn concavity_report_is_deterministic() {
        let a = check_concavity("quaternion3".parse().unwrap(), 20, 9).unwrap().to_json();
        let b = check_concavity("quaternion3".parse().unwrap(), 20, 9).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_form_is_positive() {
        for name in ["complex3", "quaternion4", "spin5"] {
            let r = euclidean_check(name.parse().unwrap(), 100, 1).unwrap();
            assert!(r.pass, "{name}");
        }
    }
}
