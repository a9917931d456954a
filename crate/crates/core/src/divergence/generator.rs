//! Convex generators, action sets, envelopes and regret.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{clamped, leaks_outside_support};
use crate::cone::{same_space, AffineFunctional, State};
use crate::error::{Error, Result};
use crate::geometry::StateSpace;
use crate::jordan::{apply_function, von_neumann_entropy, ScalarFunction};
use crate::linalg::Matrix;

/// Step of the central difference used by `finite_difference_gradient`.
pub const GRADIENT_STEP: f64 = 1e-6;
/// Actions within this (relative) distance of the envelope count as optimal.
pub const OPTIMALITY_TOL: f64 = 1e-12;

/// A convex function on a state space with a gradient oracle.
#[derive(Clone)]
pub enum Generator {
    /// `Σ p ln p`, or `Tr ρ ln ρ` on density matrices.
    NegEntropy,
    /// `Σ x²` in canonical coordinates.
    SquaredNorm,
    /// `−Σ ln p` on a simplex.
    Burg,
    Scaled { factor: f64, inner: Box<Generator> },
    /// A user function with a finite-difference gradient.
    Custom {
        name: String,
        f: CustomFn,
    },
}

pub type CustomFn = Arc<dyn Fn(&State) -> Result<f64> + Send + Sync>;

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({})", self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neg-entropy" | "negentropy" => Ok(Generator::NegEntropy),
            "squared-norm" => Ok(Generator::SquaredNorm),
            "burg" => Ok(Generator::Burg),
            _ => Err(Error::Parse(format!("unknown generator `{s}`"))),
        }
    }
}

impl Generator {
    pub fn name(&self) -> String {
        match self {
            Generator::NegEntropy => "neg-entropy".into(),
            Generator::SquaredNorm => "squared-norm".into(),
            Generator::Burg => "burg".into(),
            Generator::Scaled { factor, inner } => format!("{factor}*{}", inner.name()),
            Generator::Custom { name, .. } => name.clone(),
        }
    }

    pub fn supports(&self, space: &StateSpace) -> bool {
        match self {
            Generator::NegEntropy => matches!(space, StateSpace::Simplex { .. } | StateSpace::Density { .. }),
            Generator::Burg => matches!(space, StateSpace::Simplex { .. }),
            Generator::SquaredNorm | Generator::Custom { .. } => true,
            Generator::Scaled { inner, .. } => inner.supports(space),
        }
    }

    fn check(&self, s: &State) -> Result<()> {
        if self.supports(s.space()) {
            Ok(())
        } else {
            Err(Error::Unsupported {
                space: s.space().to_string(),
                op: "this generator",
            })
        }
    }

    /// `F(s)`; `+∞` where the generator blows up.
    pub fn value(&self, s: &State) -> Result<f64> {
        self.check(s)?;
        let x = s.coords();
        Ok(match self {
            Generator::NegEntropy => match &**s.space() {
                StateSpace::Density { .. } => -von_neumann_entropy(&s.matrix()?)?,
                _ => x.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum(),
            },
            Generator::SquaredNorm => x.iter().map(|c| c * c).sum(),
            Generator::Burg => {
                if x.iter().any(|p| *p <= 0.0) {
                    f64::INFINITY
                } else {
                    -x.iter().map(|p| p.ln()).sum::<f64>()
                }
            }
            Generator::Scaled { factor, inner } => factor * inner.value(s)?,
            Generator::Custom { f, .. } => f(s)?,
        })
    }

    /// `∇F` in canonical coordinates, evaluated at `s` mixed with the
    /// barycenter by `CLAMP`.
    pub fn gradient(&self, s: &State) -> Result<Vec<f64>> {
        self.check(s)?;
        let inner = State::new_unchecked(s.space().clone(), clamped(s));
        let x = inner.coords();
        Ok(match self {
            Generator::NegEntropy => match &**s.space() {
                StateSpace::Density { ring, n } => {
                    let log = apply_function(&ScalarFunction::ln(), &inner.matrix()?)?;
                    (log.matrix() + &Matrix::identity(*ring, *n)).coords()
                }
                _ => x.iter().map(|p| p.ln() + 1.0).collect(),
            },
            Generator::SquaredNorm => s.coords().iter().map(|c| 2.0 * c).collect(),
            Generator::Burg => x.iter().map(|p| -1.0 / p).collect(),
            Generator::Scaled { factor, inner: g } => g.gradient(s)?.into_iter().map(|c| factor * c).collect(),
            Generator::Custom { .. } => finite_difference_gradient(self, s)?,
        })
    }

    /// Whether `D_F(s1, s2)` is infinite by failure of absolute continuity.
    fn singular_pair(&self, s1: &State, s2: &State) -> Result<bool> {
        Ok(match self {
            Generator::NegEntropy => match &**s1.space() {
                StateSpace::Density { .. } => leaks_outside_support(&s1.matrix()?, &s2.matrix()?)?,
                _ => s1.coords().iter().zip(s2.coords()).any(|(p, q)| *p > 0.0 && *q <= 0.0),
            },
            Generator::Scaled { inner, .. } => inner.singular_pair(s1, s2)?,
            _ => false,
        })
    }

    /// The tangent action at `s`: `t ↦ F(s) + ⟨∇F(s), t − s⟩`.
    pub fn tangent(&self, s: &State) -> Result<AffineFunctional> {
        let value = self.value(s)?;
        if !value.is_finite() {
            return Err(Error::GradientUndefined(format!("{} is infinite at the state", self.name())));
        }
        let g = self.gradient(s)?;
        let offset = value - g.iter().zip(s.coords()).map(|(a, b)| a * b).sum::<f64>();
        Ok(AffineFunctional::new(g, offset))
    }
}

/// Central differences of `F` along an orthonormal basis of the tangent
/// space, at the clamped state.
pub fn finite_difference_gradient(gen: &Generator, s: &State) -> Result<Vec<f64>> {
    let space = s.space();
    let x = clamped(s);
    let mut g = vec![0.0; x.len()];
    for b in space.tangent_basis() {
        let shifted = |sign: f64| {
            let c: Vec<f64> = x.iter().zip(&b).map(|(xi, bi)| xi + sign * GRADIENT_STEP * bi).collect();
            State::new_unchecked(space.clone(), c)
        };
        let coeff = (gen.value(&shifted(1.0))? - gen.value(&shifted(-1.0))?) / (2.0 * GRADIENT_STEP);
        g.iter_mut().zip(&b).for_each(|(gi, bi)| *gi += coeff * bi);
    }
    Ok(g)
}

/// `F(s1) − F(s2) − ⟨∇F(s2), s1 − s2⟩`; `+∞` when `s1` is not absolutely
/// continuous with respect to `s2` for an entropy generator.
pub fn bregman(gen: &Generator, s1: &State, s2: &State) -> Result<f64> {
    if !same_space(s1.space(), s2.space()) {
        return Err(Error::MixedSpaces);
    }
    if gen.singular_pair(s1, s2)? {
        return Ok(f64::INFINITY);
    }
    let f2 = gen.value(s2)?;
    if !f2.is_finite() {
        return Err(Error::GradientUndefined(format!("{} is infinite at the second state", gen.name())));
    }
    let f1 = gen.value(s1)?;
    if !f1.is_finite() {
        return Ok(f64::INFINITY);
    }
    let g = gen.gradient(s2)?;
    let lin: f64 = g
        .iter()
        .zip(s1.coords().iter().zip(s2.coords()))
        .map(|(gi, (a, b))| gi * (a - b))
        .sum();
    Ok(f1 - f2 - lin)
}

/// A closed set of payoff functionals: a finite list, or the tangent planes
/// of a convex generator.
#[derive(Debug, Clone)]
pub enum ActionSet {
    Finite(Vec<AffineFunctional>),
    Tangents(Generator),
}

impl ActionSet {
    pub fn supports(&self, space: &StateSpace) -> bool {
        match self {
            ActionSet::Finite(actions) => actions.iter().all(|a| a.linear.len() == space.coord_len()),
            ActionSet::Tangents(g) => g.supports(space),
        }
    }
}

/// `F(s) = max ⟨a, s⟩` with an attaining action.
pub fn envelope(actions: &ActionSet, s: &State) -> Result<(f64, AffineFunctional)> {
    match actions {
        ActionSet::Finite(list) => {
            let mut best: Option<(f64, &AffineFunctional)> = None;
            for a in list {
                if a.linear.len() != s.coords().len() {
                    return Err(Error::DimensionMismatch {
                        expected: s.coords().len(),
                        got: a.linear.len(),
                    });
                }
                let v = a.value_at(s.coords());
                if best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, a));
                }
            }
            let (v, a) = best.ok_or(Error::Empty("action set"))?;
            Ok((v, a.clone()))
        }
        ActionSet::Tangents(g) => Ok((g.value(s)?, g.tangent(s)?)),
    }
}

/// Every action attaining the envelope at `s`.
pub fn optimal_actions(actions: &ActionSet, s: &State) -> Result<Vec<AffineFunctional>> {
    let (best, a) = envelope(actions, s)?;
    Ok(match actions {
        ActionSet::Finite(list) => {
            let tol = OPTIMALITY_TOL * best.abs().max(1.0);
            list.iter()
                .filter(|a| a.value_at(s.coords()) >= best - tol)
                .cloned()
                .collect()
        }
        ActionSet::Tangents(_) => vec![a],
    })
}

/// `F(s) − ⟨a, s⟩`.
pub fn regret_action(s: &State, a: &AffineFunctional, actions: &ActionSet) -> Result<f64> {
    Ok(envelope(actions, s)?.0 - a.value_at(s.coords()))
}

/// Least regret at `s1` over the actions optimal for `s2`.
pub fn regret_state(s1: &State, s2: &State, actions: &ActionSet) -> Result<f64> {
    if !same_space(s1.space(), s2.space()) {
        return Err(Error::MixedSpaces);
    }
    let optimal = optimal_actions(actions, s2)?;
    let f1 = envelope(actions, s1)?.0;
    optimal
        .iter()
        .map(|a| f1 - a.value_at(s1.coords()))
        .reduce(f64::min)
        .ok_or(Error::NoOptimalAction)
}
