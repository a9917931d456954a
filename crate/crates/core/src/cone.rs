//! States, cone elements `λ·s` and affine functionals.

use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{StateSpace, MEMBERSHIP_TOL};
use crate::jordan::HermitianMatrix;
use crate::json::{matrix_entries, matrix_from_rows, EntryRepr};
use crate::linalg::Matrix;

/// Tolerance on `Σ w = 1` for mixing weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// A point of a state space in its canonical coordinates.
#[derive(Debug, Clone)]
pub struct State {
    space: Arc<StateSpace>,
    coords: Vec<f64>,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.coords == other.coords
    }
}

pub(crate) fn same_space(a: &Arc<StateSpace>, b: &Arc<StateSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl State {
    pub fn new(space: Arc<StateSpace>, coords: Vec<f64>) -> Result<Self> {
        let violation = space.violation(&coords)?;
        if violation > MEMBERSHIP_TOL {
            return Err(Error::NotInSpace { violation });
        }
        Ok(State { space, coords })
    }

    pub(crate) fn new_unchecked(space: Arc<StateSpace>, coords: Vec<f64>) -> Self {
        State { space, coords }
    }

    /// The state with the given density matrix.
    pub fn from_matrix(space: Arc<StateSpace>, m: &HermitianMatrix) -> Result<Self> {
        let coords = m.matrix().with_ring(match *space {
            StateSpace::Density { ring, .. } => ring,
            _ => {
                return Err(Error::Unsupported {
                    space: space.to_string(),
                    op: "matrix states",
                })
            }
        });
        State::new(space, coords.coords())
    }

    pub fn barycenter(space: Arc<StateSpace>) -> Self {
        let coords = space.barycenter();
        State { space, coords }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn matrix(&self) -> Result<HermitianMatrix> {
        self.space.matrix_of(&self.coords)
    }

    pub fn is_pure(&self) -> Result<bool> {
        self.space.is_pure(&self.coords)
    }

    pub fn scaled(&self, trace: f64) -> Result<ConeElement> {
        ConeElement::new(self.space.clone(), trace, self.coords.clone())
    }

    /// Max-norm distance between canonical coordinates.
    pub fn distance(&self, other: &State) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// `λ·s` in the positive cone; the apex has `λ = 0` and carries the
/// barycenter as a placeholder state.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    state: State,
    trace: f64,
}

impl ConeElement {
    pub fn new(space: Arc<StateSpace>, trace: f64, coords: Vec<f64>) -> Result<Self> {
        if trace < 0.0 || trace.is_nan() {
            return Err(Error::NegativeTrace(trace));
        }
        if trace == 0.0 {
            return Ok(ConeElement::apex(space));
        }
        Ok(ConeElement {
            state: State::new(space, coords)?,
            trace,
        })
    }

    pub fn from_state(state: State, trace: f64) -> Result<Self> {
        if trace < 0.0 || trace.is_nan() {
            return Err(Error::NegativeTrace(trace));
        }
        if trace == 0.0 {
            return Ok(ConeElement::apex(state.space));
        }
        Ok(ConeElement { state, trace })
    }

    pub fn apex(space: Arc<StateSpace>) -> Self {
        ConeElement {
            state: State::barycenter(space),
            trace: 0.0,
        }
    }

    pub fn is_apex(&self) -> bool {
        self.trace == 0.0
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.state.space
    }

    /// The normalized state `x / Tr(x)`.
    pub fn state(&self) -> Result<&State> {
        if self.is_apex() {
            Err(Error::Apex("normalized state"))
        } else {
            Ok(&self.state)
        }
    }

    /// `λ·coords`, the element as a vector of the ambient space.
    pub fn embedded(&self) -> Vec<f64> {
        self.state.coords.iter().map(|c| c * self.trace).collect()
    }
}

impl From<State> for ConeElement {
    fn from(state: State) -> Self {
        ConeElement { state, trace: 1.0 }
    }
}

pub fn mix(weights: &[f64], states: &[State]) -> Result<State> {
    if states.is_empty() {
        return Err(Error::Empty("mixture"));
    }
    if weights.len() != states.len() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            got: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0 || w.is_nan()) || (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidWeights(total));
    }
    let space = states[0].space.clone();
    if states.iter().any(|s| !same_space(&s.space, &space)) {
        return Err(Error::MixedSpaces);
    }
    let mut coords = vec![0.0; space.coord_len()];
    for (w, s) in weights.iter().zip(states) {
        for (c, x) in coords.iter_mut().zip(&s.coords) {
            *c += w * x;
        }
    }
    Ok(State::new_unchecked(space, coords))
}

/// `λ·s₁ + μ·s₂ = (λ+μ)·(λ/(λ+μ)·s₁ + μ/(λ+μ)·s₂)`.
pub fn cone_add(x: &ConeElement, y: &ConeElement) -> Result<ConeElement> {
    if !same_space(x.space(), y.space()) {
        return Err(Error::MixedSpaces);
    }
    let total = x.trace + y.trace;
    if total == 0.0 {
        return Ok(ConeElement::apex(x.space().clone()));
    }
    let (a, b) = (x.trace / total, y.trace / total);
    let coords = x
        .state
        .coords
        .iter()
        .zip(&y.state.coords)
        .map(|(p, q)| a * p + b * q)
        .collect();
    Ok(ConeElement {
        state: State::new_unchecked(x.space().clone(), coords),
        trace: total,
    })
}

pub fn trace(x: &ConeElement) -> f64 {
    x.trace
}

/// An affine map `s ↦ ⟨linear, s⟩ + offset` in canonical coordinates. As a
/// test it takes values in `[0, 1]`; as an action it is a payoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFunctional {
    pub linear: Vec<f64>,
    pub offset: f64,
}

impl AffineFunctional {
    pub fn new(linear: Vec<f64>, offset: f64) -> Self {
        AffineFunctional { linear, offset }
    }

    pub fn constant(value: f64, coord_len: usize) -> Self {
        AffineFunctional::new(vec![0.0; coord_len], value)
    }

    /// `ρ ↦ Tr(Mρ) + offset`. Since `Tr(Mρ) = Σ_ij Re(M_ij · conj(ρ_ij))`, the
    /// covector is the coordinate vector of `M` itself.
    pub fn trace_pairing(m: &HermitianMatrix, offset: f64) -> Self {
        AffineFunctional::new(m.matrix().coords(), offset)
    }

    pub fn value_at(&self, coords: &[f64]) -> f64 {
        self.linear.iter().zip(coords).map(|(a, x)| a * x).sum::<f64>() + self.offset
    }

    /// Whether the functional maps the state space into `[0, 1]`, up to `tol`.
    pub fn is_test(&self, space: &StateSpace, tol: f64) -> Result<bool> {
        let (lo, hi) = space.functional_range(self)?;
        Ok(lo >= -tol && hi <= 1.0 + tol)
    }
}

pub fn evaluate(a: &AffineFunctional, s: &State) -> f64 {
    a.value_at(&s.coords)
}

/// Linear extension to the cone: `⟨a, λs⟩ = λ⟨a, s⟩`.
pub fn evaluate_cone(a: &AffineFunctional, x: &ConeElement) -> f64 {
    if x.is_apex() {
        0.0
    } else {
        x.trace * a.value_at(&x.state.coords)
    }
}

fn coords_json(space: &StateSpace, coords: &[f64]) -> Value {
    match space {
        StateSpace::Density { ring, n } => {
            let m = Matrix::from_coords(*ring, *n, coords).expect("coordinates match the space");
            serde_json::to_value(matrix_entries(&m)).expect("entries serialize")
        }
        _ => serde_json::to_value(coords).expect("coordinates serialize"),
    }
}

/// Canonical coordinates from JSON: a flat number list, a flat list of matrix
/// entries (`x`, `[re, im]` or `[a, b, c, d]`), or nested matrix rows.
pub fn parse_coords(space: &StateSpace, value: &Value) -> Result<Vec<f64>> {
    let bad = |e: serde_json::Error| Error::Parse(e.to_string());
    let StateSpace::Density { ring, n } = space else {
        return serde_json::from_value::<Vec<f64>>(value.clone()).map_err(bad);
    };
    if let Ok(flat) = serde_json::from_value::<Vec<f64>>(value.clone()) {
        if flat.len() == space.coord_len() {
            return Ok(flat);
        }
    }
    if let Ok(rows) = serde_json::from_value::<Vec<Vec<EntryRepr>>>(value.clone()) {
        if rows.len() == *n && rows.iter().all(|r| r.len() == *n) {
            return Ok(matrix_from_rows(&rows, Some(*ring))?.coords());
        }
    }
    let entries: Vec<EntryRepr> = serde_json::from_value(value.clone()).map_err(bad)?;
    if entries.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: entries.len(),
        });
    }
    let data = entries.into_iter().map(|e| e.decode()).collect();
    Ok(Matrix::from_entries(*ring, *n, data)?.coords())
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    space: StateSpace,
    #[serde(default = "one")]
    trace: f64,
    coords: Value,
}

fn one() -> f64 {
    1.0
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            space: (*self.space).clone(),
            trace: 1.0,
            coords: coords_json(&self.space, &self.coords),
        }
        .serialize(s)
    }
}

impl Serialize for ConeElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            space: (*self.state.space).clone(),
            trace: self.trace,
            coords: coords_json(&self.state.space, &self.state.coords),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConeElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        let coords = parse_coords(&repr.space, &repr.coords).map_err(D::Error::custom)?;
        ConeElement::new(Arc::new(repr.space), repr.trace, coords).map_err(D::Error::custom)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        if (repr.trace - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(D::Error::custom(format!("a state has trace 1, got {}", repr.trace)));
        }
        let coords = parse_coords(&repr.space, &repr.coords).map_err(D::Error::custom)?;
        State::new(Arc::new(repr.space), coords).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;
    use crate::sampling::trial_rng;
    use proptest::prelude::*;

    fn square_state(x: f64, y: f64) -> State {
        State::new(StateSpace::unit_square(), vec![x, y]).unwrap()
    }

    fn simplex_state(p: &[f64]) -> State {
        State::new(StateSpace::simplex(p.len()).unwrap(), p.to_vec()).unwrap()
    }

    #[test]
    fn mixing_square_vertices() {
        let s = mix(
            &[0.5, 0.25, 0.25],
            &[square_state(1.0, 0.0), square_state(0.0, 1.0), square_state(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(s.coords(), &[0.5, 0.25]);
        let single = mix(&[1.0], &[s.clone()]).unwrap();
        assert_eq!(single, s);
    }

    #[test]
    fn mixing_errors() {
        let a = simplex_state(&[1.0, 0.0]);
        let b = simplex_state(&[0.0, 1.0]);
        assert_eq!(mix(&[0.5, 0.5], &[a.clone(), b.clone()]).unwrap().coords(), &[0.5, 0.5]);
        assert!(matches!(mix(&[0.6, 0.5], &[a.clone(), b.clone()]), Err(Error::InvalidWeights(_))));
        assert!(matches!(mix(&[0.5, 0.5], &[a, square_state(0.0, 0.0)]), Err(Error::MixedSpaces)));
    }

    #[test]
    fn cone_addition() {
        let e1: ConeElement = simplex_state(&[1.0, 0.0, 0.0]).into();
        let e2: ConeElement = simplex_state(&[0.0, 1.0, 0.0]).into();
        let sum = cone_add(&e1, &e2).unwrap();
        assert_eq!(trace(&sum), 2.0);
        assert_eq!(sum.state().unwrap().coords(), &[0.5, 0.5, 0.0]);
        let zero = ConeElement::apex(e1.space().clone());
        assert_eq!(cone_add(&e1, &zero).unwrap(), e1);
        let twice = cone_add(&e1, &e1).unwrap();
        assert_eq!(twice.trace(), 2.0);
        assert_eq!(twice.state().unwrap(), e1.state().unwrap());
        assert!(cone_add(&zero, &zero).unwrap().is_apex());
        assert!(matches!(zero.state(), Err(Error::Apex(_))));
        assert!(ConeElement::new(e1.space().clone(), -1.0, vec![1.0, 0.0, 0.0]).is_err());
        let s = e1.state().unwrap().clone();
        assert_eq!(s.scaled(2.5).unwrap().trace(), 2.5);
    }

    #[test]
    fn evaluating_functionals() {
        let s = square_state(0.5, 0.25);
        assert_eq!(evaluate(&AffineFunctional::constant(0.3, 2), &s), 0.3);
        assert_eq!(evaluate(&AffineFunctional::new(vec![1.0, 0.0], 0.0), &s), 0.5);
        let x = s.scaled(2.0).unwrap();
        assert_eq!(evaluate_cone(&AffineFunctional::new(vec![1.0, 0.0], 0.0), &x), 1.0);
    }

    #[test]
    fn state_json_round_trip() {
        let space = StateSpace::density(Ring::Quaternion, 2).unwrap();
        let mut rng = trial_rng(1, 0);
        let s = State::new(space.clone(), space.sample_state(&mut rng)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""kind":"density""#));
        let back: State = serde_json::from_str(&text).unwrap();
        assert!(back.distance(&s) == 0.0);

        let x: ConeElement = serde_json::from_str(r#"{"space":{"kind":"simplex","n":3},"trace":2.0,"coords":[0.5,0.5,0.0]}"#).unwrap();
        assert_eq!(x.trace(), 2.0);
        let q: State = serde_json::from_str(
            r#"{"space":{"kind":"density","ring":"complex","n":2},"trace":1,"coords":[[[0.75,0],[0,0]],[[0,0],[0.25,0]]]}"#,
        )
        .unwrap();
        assert_eq!(q.matrix().unwrap().matrix().get(0, 0).re, 0.75);
        assert!(serde_json::from_str::<State>(r#"{"space":{"kind":"simplex","n":2},"coords":[0.7,0.7]}"#).is_err());
    }

    proptest! {
        #[test]
        fn evaluate_commutes_with_mix(seed in any::<u64>()) {
            let mut rng = trial_rng(seed, 0);
            for space in [StateSpace::unit_square(), StateSpace::density(Ring::Complex, 2).unwrap(), StateSpace::ball(3).unwrap()] {
                let states: Vec<State> = (0..3).map(|_| State::new(space.clone(), space.sample_state(&mut rng)).unwrap()).collect();
                let w = crate::sampling::probability_vector(&mut rng, 3);
                let a = AffineFunctional::new((0..space.coord_len()).map(|_| crate::sampling::gaussian(&mut rng)).collect(), 0.7);
                let lhs = evaluate(&a, &mix(&w, &states).unwrap());
                let rhs: f64 = w.iter().zip(&states).map(|(wi, s)| wi * evaluate(&a, s)).sum();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            }
        }

        #[test]
        fn cone_addition_is_commutative_and_associative(seed in any::<u64>(), l in 0.0..3.0f64, m in 0.0..3.0f64, k in 0.0..3.0f64) {
            let mut rng = trial_rng(seed, 1);
            let space = StateSpace::simplex(4).unwrap();
            let el = |t: f64, rng: &mut crate::sampling::TrialRng| ConeElement::new(space.clone(), t, space.sample_state(rng)).unwrap();
            let (x, y, z) = (el(l, &mut rng), el(m, &mut rng), el(k, &mut rng));
            let xy = cone_add(&x, &y).unwrap();
            let yx = cone_add(&y, &x).unwrap();
            prop_assert_eq!(xy.trace(), x.trace() + y.trace());
            prop_assert!(crate::linalg::feasibility::max_distance(&xy.embedded(), &yx.embedded()) <= 1e-12);
            let left = cone_add(&xy, &z).unwrap();
            let right = cone_add(&x, &cone_add(&y, &z).unwrap()).unwrap();
            prop_assert!(crate::linalg::feasibility::max_distance(&left.embedded(), &right.embedded()) <= 1e-12);
        }
    }
}
