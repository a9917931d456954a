//! Payoff envelopes, regret, Bregman divergences and the locality and
//! sufficiency checkers.

mod fit;
mod generator;
mod locality;
mod sufficiency;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub use fit::{fit_entropy_constant, EntropyFit};
pub use generator::{
    bregman, envelope, finite_difference_gradient, optimal_actions, regret_action, regret_state, ActionSet, Generator,
};
pub use locality::{check_locality, DEFAULT_T_GRID};
pub use sufficiency::{builtin_suite, check_sufficiency, ChannelPair};

use crate::cone::{same_space, State};
use crate::error::{Error, Result};
use crate::geometry::StateSpace;
use crate::jordan::{eigen_hermitian, HermitianMatrix};
use crate::report::extended_value;

/// Mixing weight toward the barycenter used to keep gradient points interior.
pub const CLAMP: f64 = 1e-12;
/// Eigenvalues at or below this count as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Weight a state may place outside another's support before their
/// divergence is declared infinite.
pub const LEAK_TOL: f64 = 1e-10;

/// A divergence value; `Infinite` marks a failure of absolute continuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceValue {
    Finite(f64),
    Infinite,
}

impl DivergenceValue {
    pub fn value(self) -> f64 {
        match self {
            DivergenceValue::Finite(x) => x,
            DivergenceValue::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, DivergenceValue::Finite(_))
    }

    /// `|a − b|`, with two infinite values counted as equal.
    pub fn gap(self, other: DivergenceValue) -> f64 {
        match (self, other) {
            (DivergenceValue::Finite(a), DivergenceValue::Finite(b)) => (a - b).abs(),
            (DivergenceValue::Infinite, DivergenceValue::Infinite) => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn scale(self, c: f64) -> DivergenceValue {
        match self {
            DivergenceValue::Finite(x) => DivergenceValue::Finite(c * x),
            DivergenceValue::Infinite => DivergenceValue::Infinite,
        }
    }
}

impl Serialize for DivergenceValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        extended_value(self.value()).serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Builtin,
    FromGenerator,
    FromActionSet,
}

#[derive(Debug, Clone)]
pub enum Divergence {
    /// `Σ p ln(p/q)` on a simplex.
    KullbackLeibler,
    /// `Σ (x − y)²` in canonical coordinates.
    SquaredEuclidean,
    /// `Σ p/q − ln(p/q) − 1` on a simplex, both arguments clamped inward.
    ItakuraSaito,
    /// `Tr ρ(ln ρ − ln σ)` on density matrices.
    MatrixRelativeEntropy,
    Bregman(Generator),
    Regret(Arc<ActionSet>),
    Scaled { factor: f64, inner: Box<Divergence> },
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::KullbackLeibler => write!(f, "kl"),
            Divergence::SquaredEuclidean => write!(f, "squared-euclidean"),
            Divergence::ItakuraSaito => write!(f, "itakura-saito"),
            Divergence::MatrixRelativeEntropy => write!(f, "matrix-kl"),
            Divergence::Bregman(g) => write!(f, "bregman:{}", g.name()),
            Divergence::Regret(_) => write!(f, "regret"),
            Divergence::Scaled { factor, inner } => write!(f, "{factor}*{inner}"),
        }
    }
}

impl FromStr for Divergence {
    type Err = Error;

    /// `kl`, `matrix-kl`, `squared-euclidean`, `itakura-saito`,
    /// `bregman:<generator>`, optionally prefixed by a factor as in `2*kl`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((factor, rest)) = s.split_once('*') {
            let factor: f64 = factor
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad divergence factor in `{s}`")))?;
            if factor <= 0.0 || !factor.is_finite() {
                return Err(Error::Parse(format!("divergence factor must be positive, got {factor}")));
            }
            return Ok(Divergence::Scaled {
                factor,
                inner: Box::new(rest.parse()?),
            });
        }
        if let Some(g) = s.strip_prefix("bregman:") {
            return Ok(Divergence::Bregman(g.parse()?));
        }
        Ok(match s {
            "kl" | "kullback-leibler" | "relative-entropy" => Divergence::KullbackLeibler,
            "matrix-kl" | "matrix-negentropy" | "quantum-relative-entropy" | "umegaki" => {
                Divergence::MatrixRelativeEntropy
            }
            "squared-euclidean" | "sqeuclidean" | "euclidean" => Divergence::SquaredEuclidean,
            "itakura-saito" | "is" => Divergence::ItakuraSaito,
            _ => return Err(Error::Parse(format!("unknown divergence `{s}`"))),
        })
    }
}

impl Divergence {
    /// The builtin divergences exercised by the property checkers.
    pub fn zoo() -> Vec<Divergence> {
        vec![
            Divergence::KullbackLeibler,
            Divergence::SquaredEuclidean,
            Divergence::ItakuraSaito,
            Divergence::MatrixRelativeEntropy,
        ]
    }

    pub fn scaled(self, factor: f64) -> Divergence {
        Divergence::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Divergence::Bregman(_) => Provenance::FromGenerator,
            Divergence::Regret(_) => Provenance::FromActionSet,
            Divergence::Scaled { inner, .. } => inner.provenance(),
            _ => Provenance::Builtin,
        }
    }

    /// Relative entropy takes its matrix form on density matrices.
    pub fn for_space(self, space: &StateSpace) -> Divergence {
        match (self, space) {
            (Divergence::KullbackLeibler, StateSpace::Density { .. }) => Divergence::MatrixRelativeEntropy,
            (Divergence::MatrixRelativeEntropy, StateSpace::Simplex { .. }) => Divergence::KullbackLeibler,
            (Divergence::Scaled { factor, inner }, _) => Divergence::Scaled {
                factor,
                inner: Box::new(inner.for_space(space)),
            },
            (d, _) => d,
        }
    }

    pub fn supports(&self, space: &StateSpace) -> bool {
        match self {
            Divergence::KullbackLeibler | Divergence::ItakuraSaito => matches!(space, StateSpace::Simplex { .. }),
            Divergence::MatrixRelativeEntropy => matches!(space, StateSpace::Density { .. }),
            Divergence::SquaredEuclidean => true,
            Divergence::Regret(actions) => actions.supports(space),
            Divergence::Bregman(g) => g.supports(space),
            Divergence::Scaled { inner, .. } => inner.supports(space),
        }
    }

    pub fn evaluate(&self, s1: &State, s2: &State) -> Result<DivergenceValue> {
        if !same_space(s1.space(), s2.space()) {
            return Err(Error::MixedSpaces);
        }
        let space = s1.space();
        if !self.supports(space) {
            return Err(Error::Unsupported {
                space: space.to_string(),
                op: "this divergence",
            });
        }
        let (p, q) = (s1.coords(), s2.coords());
        Ok(match self {
            Divergence::KullbackLeibler => kullback_leibler(p, q),
            Divergence::SquaredEuclidean => {
                DivergenceValue::Finite(p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum())
            }
            Divergence::ItakuraSaito => {
                let (p, q) = (clamped(s1), clamped(s2));
                DivergenceValue::Finite(
                    p.iter()
                        .zip(&q)
                        .map(|(a, b)| a / b - (a / b).ln() - 1.0)
                        .sum(),
                )
            }
            Divergence::MatrixRelativeEntropy => matrix_relative_entropy(&s1.matrix()?, &s2.matrix()?)?,
            Divergence::Bregman(g) => {
                let d = bregman(g, s1, s2)?;
                if d.is_finite() {
                    DivergenceValue::Finite(d)
                } else {
                    DivergenceValue::Infinite
                }
            }
            Divergence::Regret(actions) => DivergenceValue::Finite(regret_state(s1, s2, actions)?),
            Divergence::Scaled { factor, inner } => inner.evaluate(s1, s2)?.scale(*factor),
        })
    }
}

/// `(1 − ε)·s + ε·barycenter`.
pub(crate) fn clamped(s: &State) -> Vec<f64> {
    let bary = s.space().barycenter();
    s.coords()
        .iter()
        .zip(&bary)
        .map(|(x, b)| (1.0 - CLAMP) * x + CLAMP * b)
        .collect()
}

/// `Σ p ln(p/q)` with `0 ln 0 = 0`; infinite when some `q_i = 0 < p_i`.
pub fn kullback_leibler(p: &[f64], q: &[f64]) -> DivergenceValue {
    let mut total = 0.0;
    for (a, b) in p.iter().zip(q) {
        if *a <= 0.0 {
            continue;
        }
        if *b <= 0.0 {
            return DivergenceValue::Infinite;
        }
        total += a * (a / b).ln();
    }
    DivergenceValue::Finite(total)
}

/// Whether `ρ` places more than `LEAK_TOL` weight outside the support of `σ`.
pub(crate) fn leaks_outside_support(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<bool> {
    let eig = eigen_hermitian(sigma)?;
    let leak: f64 = eig
        .eigenvalues
        .iter()
        .zip(&eig.idempotents)
        .filter(|(t, _)| **t <= SUPPORT_TOL)
        .map(|(_, e)| rho.trace_product(e))
        .sum();
    Ok(leak > LEAK_TOL)
}

/// `Tr ρ ln ρ − Tr ρ ln σ`, evaluated on the spectral projections of `σ`.
pub fn matrix_relative_entropy(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<DivergenceValue> {
    let er = eigen_hermitian(rho)?;
    let neg_entropy: f64 = er
        .eigenvalues
        .iter()
        .zip(&er.multiplicities)
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, m)| *m as f64 * t * t.ln())
        .sum();
    let es = eigen_hermitian(sigma)?;
    let mut cross = 0.0;
    for (t, e) in es.eigenvalues.iter().zip(&es.idempotents) {
        let w = rho.trace_product(e);
        if *t <= SUPPORT_TOL {
            if w > LEAK_TOL {
                return Ok(DivergenceValue::Infinite);
            }
            continue;
        }
        cross += w * t.ln();
    }
    Ok(DivergenceValue::Finite(neg_entropy - cross))
}
